//! Extending automorphisms of `Γ(𝒥)` to automorphisms of `Γ_k(V)`.
//!
//! Automorphisms of `Γ_k(V)` are taken to be those induced by semilinear
//! automorphisms of `V` and, for `n = 2k`, by semilinear isomorphisms
//! `V → V*`.

mod solver;

use rayon::prelude::*;
use serde::Serialize;

use crate::embeddings::{classify, Classification, ClassificationKind, EmbeddingInstance};
use crate::error::{Error, Result};
use crate::field::{Field, FieldAutomorphism};
use crate::independence::{Ambient, PointSet};
use crate::johnson::{JohnsonAut, JohnsonGraph};
use crate::semilinear::SemilinearMap;
use crate::subspace::Subspace;

pub use solver::{solution_space, AttemptOutcome, Constraint, SigmaAttempt, SolverOptions};

/// A semilinear map realizing an automorphism, checked on every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionWitness {
    pub map: SemilinearMap,
    pub checked_elements: usize,
}

impl ExtensionWitness {
    pub fn is_duality(&self) -> bool {
        self.map.codomain_is_dual()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub attempts: Vec<SigmaAttempt>,
}

impl Certificate {
    /// `n − max rank` over every solution examined.
    pub fn rank_defect(&self, n: usize) -> usize {
        n - self.attempts.iter().map(|a| a.max_rank).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    Witness(ExtensionWitness),
    NotExtendable(Certificate),
    Unknown(Certificate),
}

impl Extension {
    pub fn is_witness(&self) -> bool {
        matches!(self, Extension::Witness(_))
    }

    pub fn witness(&self) -> Option<&ExtensionWitness> {
        match self {
            Extension::Witness(w) => Some(w),
            _ => None,
        }
    }
}

/// Tries every field automorphism; the first invertible solution wins.
fn search(
    field: &Field,
    n: usize,
    dual: bool,
    constraints: &[Constraint],
    opts: &SolverOptions,
    attempts: &mut Vec<SigmaAttempt>,
) -> Option<SemilinearMap> {
    for sigma in field.automorphisms() {
        let solved = solver::solve(field, n, sigma, dual, constraints, opts);
        attempts.push(solved.attempt);
        if let Some(matrix) = solved.matrix {
            return Some(SemilinearMap::new(matrix, sigma, dual).expect("invertible"));
        }
    }
    None
}

fn conclude(found: Option<ExtensionWitness>, attempts: Vec<SigmaAttempt>) -> Extension {
    match found {
        Some(w) => Extension::Witness(w),
        None if attempts.iter().any(|a| a.outcome == AttemptOutcome::Unresolved) => {
            Extension::Unknown(Certificate { attempts })
        }
        None => Extension::NotExtendable(Certificate { attempts }),
    }
}

/// Lines `⟨e_t⟩` for the standard vectors outside `span`'s pivot columns,
/// each required to be mapped to itself. Any extension can be changed on
/// this complement so that the requirement holds.
fn complement_lines(span: &Subspace) -> Vec<Constraint> {
    let field = span.field();
    let n = span.ambient_dim();
    span.complement_coordinates()
        .into_iter()
        .map(|t| {
            let line = Subspace::coordinate(field, n, &[t]);
            Constraint::maps_into(&line, &line)
        })
        .collect()
}

/// Is there a semilinear automorphism `u` of `V` with `u(X_i) = X_{π(i)}`
/// that also preserves the base (`M` or `N`) of the ambient?
pub fn induced_by_semilinear(points: &PointSet, perm: &[usize], opts: &SolverOptions) -> Result<Extension> {
    if perm.len() != points.len() {
        return Err(Error::pre("permutation length differs from the number of points"));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::pre(format!("{perm:?} is not a permutation")));
        }
    }
    let ambient = points.ambient();
    let field = ambient.field().clone();
    let n = ambient.n();
    let base = ambient.base();
    let mut cons = vec![Constraint::maps_into(base, base)];
    for (i, &p) in perm.iter().enumerate() {
        cons.push(Constraint::maps_into(&points.points()[i], &points.points()[p]));
    }
    let span = match ambient {
        Ambient::Over(m) => points.points().iter().fold(m.clone(), |acc, x| acc.sum_unchecked(x)),
        Ambient::Under(roof) => roof.clone(),
    };
    cons.extend(complement_lines(&span));
    let mut attempts = Vec::new();
    let found = search(&field, n, false, &cons, opts, &mut attempts).map(|map| {
        for (i, &p) in perm.iter().enumerate() {
            assert_eq!(
                map.act(&points.points()[i]).expect("same ambient"),
                points.points()[p],
                "solver returned a map violating its constraints"
            );
        }
        ExtensionWitness {
            map,
            checked_elements: perm.len(),
        }
    });
    Ok(conclude(found, attempts))
}

fn verify_on_image(inst: &EmbeddingInstance, aut: &JohnsonAut, map: &SemilinearMap) -> Result<usize> {
    let j = inst.johnson();
    let perm = aut.vertex_permutation(j)?;
    for (i, s) in inst.map().iter().enumerate() {
        if map.act(s)? != inst.map()[perm[i]] {
            return Err(Error::Invariant(format!(
                "witness does not realize the automorphism at {:?}",
                j.vertices()[i]
            )));
        }
    }
    Ok(inst.map().len())
}

/// Extends the automorphism of `Γ(𝒥)` induced by `aut` (acting on the
/// classification's labeling) to an automorphism of `Γ_k(V)`, if possible.
pub fn extend_automorphism(
    classification: &Classification,
    aut: &JohnsonAut,
    opts: &SolverOptions,
) -> Result<Extension> {
    let inst = classification.rebuild()?;
    extend_on(classification, &inst, aut, opts)
}

fn extend_on(
    classification: &Classification,
    inst: &EmbeddingInstance,
    aut: &JohnsonAut,
    opts: &SolverOptions,
) -> Result<Extension> {
    let j = inst.johnson();
    aut.vertex_permutation(j)?;
    let (n, k) = (inst.n(), inst.k());
    let field = inst.field().clone();
    let ext = if !aut.complement {
        induced_by_semilinear(classification.generators(), &aut.perm, opts)?
    } else {
        let perm = aut.vertex_permutation(j)?;
        let span = Subspace::sum_all(inst.map()).expect("nonempty");
        let mut cons: Vec<Constraint> = inst
            .map()
            .iter()
            .enumerate()
            .map(|(i, s)| Constraint::maps_into(s, &inst.map()[perm[i]]))
            .collect();
        cons.extend(complement_lines(&span));
        let mut attempts = Vec::new();
        let mut found = search(&field, n, false, &cons, opts, &mut attempts);
        if found.is_none() && n == 2 * k {
            let dual_cons: Vec<Constraint> = inst
                .map()
                .iter()
                .enumerate()
                .map(|(i, s)| Constraint::dualizes_to(s, &inst.map()[perm[i]]))
                .collect();
            found = search(&field, n, true, &dual_cons, opts, &mut attempts);
        }
        conclude(
            found.map(|map| ExtensionWitness {
                map,
                checked_elements: 0,
            }),
            attempts,
        )
    };
    Ok(match ext {
        Extension::Witness(w) => {
            let checked = verify_on_image(inst, aut, &w.map)?;
            Extension::Witness(ExtensionWitness {
                map: w.map,
                checked_elements: checked,
            })
        }
        other => other,
    })
}

/// Which rigid family (if any) the recovered classification belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RigidityCase {
    /// An apartment of `G_k(V)`.
    Apartment,
    /// An apartment of a proper parabolic subspace.
    ParabolicApartment,
    /// Faces of a simplex in `[M⟩`.
    SimplexFaces,
    /// Faces of a simplex in `⟨N]`.
    DualSimplexFaces,
    /// Generators neither independent nor a simplex.
    Other,
}

#[derive(Debug, Clone)]
pub struct RigidityReport {
    pub classification: Classification,
    pub is_rigid: bool,
    /// `false` when some generator could not be decided.
    pub complete: bool,
    pub per_automorphism: Vec<(JohnsonAut, Extension)>,
    pub rigidity_case: RigidityCase,
    pub predicted_rigid: bool,
    /// `l > max(k, n − k) + m′ + 1`, under which no rigid image exists.
    pub beyond_rigidity_bound: bool,
    /// The pointwise stabilizer of `𝒥` in `PGL(V)` is trivial; `None` if too
    /// large to enumerate.
    pub unique_pgl_extension: Option<bool>,
    pub pgl_stabilizer_order: Option<u64>,
    /// The generators form an `n`-simplex of `Π_V` or `Π*_V`.
    pub full_space_simplex: bool,
}

fn rigidity_case(c: &Classification) -> RigidityCase {
    if c.is_full_apartment {
        return RigidityCase::Apartment;
    }
    let gens = c.generators();
    if matches!(c.kind, ClassificationKind::ParabolicApartment { .. }) || gens.is_independent() {
        return RigidityCase::ParabolicApartment;
    }
    if gens.simplex_rank().is_simplex {
        return match gens.ambient() {
            Ambient::Over(_) => RigidityCase::SimplexFaces,
            Ambient::Under(_) => RigidityCase::DualSimplexFaces,
        };
    }
    RigidityCase::Other
}

/// Order of `{u ∈ GL(V) : u(S) = S for all S ∈ 𝒥} / scalars`.
pub fn pgl_stabilizer_order(inst: &EmbeddingInstance, limit: u64) -> Option<u64> {
    let field = inst.field();
    let n = inst.n();
    let cons: Vec<Constraint> = inst.map().iter().map(|s| Constraint::maps_into(s, s)).collect();
    let (basis, _) = solution_space(field, n, FieldAutomorphism::IDENTITY, &cons);
    if basis.len() == 1 {
        return Some(1);
    }
    solver::count_invertible(field, n, &basis, limit).map(|c| c / (field.q() as u64 - 1))
}

/// Checks every generator of `Aut(Γ(𝒥))` for an extension.
pub fn is_rigid(inst: &EmbeddingInstance, opts: &SolverOptions) -> Result<RigidityReport> {
    let classification = classify(inst)?;
    let rebuilt = classification.rebuild()?;
    let (l, m, n, k) = (classification.l, classification.m, classification.n, classification.k);
    let johnson = JohnsonGraph::new(l, m)?;
    let generators = johnson.aut_generators()?;
    let per_automorphism: Vec<(JohnsonAut, Extension)> = generators
        .into_par_iter()
        .map(|aut| extend_on(&classification, &rebuilt, &aut, opts).map(|e| (aut, e)))
        .collect::<Result<Vec<_>>>()?;
    let is_rigid = per_automorphism.iter().all(|(_, e)| e.is_witness());
    let complete = !per_automorphism.iter().any(|(_, e)| matches!(e, Extension::Unknown(_)));
    let case = rigidity_case(&classification);
    let predicted_rigid = match case {
        RigidityCase::Apartment | RigidityCase::ParabolicApartment => l != 2 * m || n == 2 * k,
        RigidityCase::SimplexFaces | RigidityCase::DualSimplexFaces => true,
        RigidityCase::Other => false,
    };
    let order = pgl_stabilizer_order(&rebuilt, opts.exhaustive_limit);
    let gens = classification.generators();
    let full_space_simplex = gens.len() == n + 1
        && gens.simplex_rank().is_simplex
        && match gens.ambient() {
            Ambient::Over(m) => m.is_zero(),
            Ambient::Under(roof) => roof.is_full(),
        };
    Ok(RigidityReport {
        is_rigid,
        complete,
        per_automorphism,
        rigidity_case: case,
        predicted_rigid,
        beyond_rigidity_bound: l > k.max(n - k) + m + 1,
        unique_pgl_extension: order.map(|o| o == 1),
        pgl_stabilizer_order: order,
        full_space_simplex,
        classification,
    })
}
