use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmannian::{classify_max_cliques_containing, CliqueKind};
use crate::independence::{Ambient, PointSet};
use crate::johnson::{JohnsonGraph, JohnsonVertex};
use crate::subspace::Subspace;

use super::construct::{build_dual, build_sum};
use super::labeling::label_image;
use super::{require_isometric, EmbeddingInstance};

/// Whether Johnson stars go to Grassmann stars (`A`) or to tops (`B`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    A,
    B,
}

impl Case {
    pub fn flip(self) -> Case {
        match self {
            Case::A => Case::B,
            Case::B => Case::A,
        }
    }
}

/// A maximal clique of the induced graph together with its type in `Γ_k(V)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedClique {
    /// `true` for the image of a Johnson star `{A ⊃ S}`, `false` for a top `{A ⊂ U}`.
    pub from_johnson_star: bool,
    pub center: JohnsonVertex,
    pub members: Vec<usize>,
    pub kind: CliqueKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueTyping {
    pub case: Case,
    pub cliques: Vec<TypedClique>,
}

fn require_fact_range(inst: &EmbeddingInstance) -> Result<()> {
    let (l, m) = (inst.l(), inst.m());
    if !(1 < m && m + 1 < l) {
        return Err(Error::pre(format!("classification needs 1 < m < l − 1, got J({l}, {m})")));
    }
    Ok(())
}

/// Types every maximal clique of the induced graph (the images of Johnson
/// stars and tops) and checks that the star/top exchange pattern is uniform.
pub fn clique_types(inst: &EmbeddingInstance) -> Result<CliqueTyping> {
    require_fact_range(inst)?;
    let j = inst.johnson();
    let mut cliques = Vec::new();
    let mut case = None;
    let sources = j
        .star_cliques()
        .into_iter()
        .map(|c| (true, c))
        .chain(j.top_cliques().into_iter().map(|c| (false, c)));
    for (from_johnson_star, (center, members)) in sources {
        let images: Vec<Subspace> = members.iter().map(|&i| inst.map()[i].clone()).collect();
        let kinds = classify_max_cliques_containing(&images)?;
        let [kind] = <[CliqueKind; 1]>::try_from(kinds).map_err(|kinds| {
            Error::Structure(format!(
                "image of the clique at {center:?} lies in {} maximal cliques",
                kinds.len()
            ))
        })?;
        let this = if kind.is_star() == from_johnson_star {
            Case::A
        } else {
            Case::B
        };
        match case {
            None => case = Some(this),
            Some(c) if c != this => {
                return Err(Error::Structure("stars and tops are not exchanged uniformly".into()));
            }
            _ => {}
        }
        cliques.push(TypedClique {
            from_johnson_star,
            center,
            members,
            kind,
        });
    }
    Ok(CliqueTyping {
        case: case.expect("Johnson graphs in range have cliques"),
        cliques,
    })
}

/// `f_{i−1}(S) = ⋂_{A ⊃ S} f(A)`, an embedding of `J(l, i−1)` in `G_{k−1}(V)`.
pub fn descend(inst: &EmbeddingInstance) -> Result<EmbeddingInstance> {
    let (l, m, k) = (inst.l(), inst.m(), inst.k());
    if m < 2 || k < 2 {
        return Err(Error::pre("descent needs m ≥ 2 and k ≥ 2"));
    }
    let lower = JohnsonGraph::new(l, m - 1)?;
    let mut map = Vec::with_capacity(lower.len());
    for &s in lower.vertices() {
        let meet = (0..l)
            .filter(|&j| !s.contains(j))
            .map(|j| inst.get(JohnsonVertex(s.0 | 1 << j)).expect("vertex"))
            .fold(None::<Subspace>, |acc, x| {
                Some(match acc {
                    None => x.clone(),
                    Some(a) => a.intersect_unchecked(x),
                })
            })
            .expect("nonempty star");
        if meet.dim() != k - 1 {
            return Err(Error::Structure(format!(
                "the images of the star at {s:?} meet in dimension {} instead of {}",
                meet.dim(),
                k - 1
            )));
        }
        map.push(meet);
    }
    let out = EmbeddingInstance::new(lower, map)?;
    require_isometric(&out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassificationKind {
    /// `𝒥 = {M + X_{i_1} + … + X_{i_m}}` with `X` points over `M`.
    StarType { base: Subspace, points: PointSet },
    /// `𝒥 = {Y_{i_1} ∩ … ∩ Y_{i_m}}` with `Y` hyperplanes of `N`.
    TopType { roof: Subspace, points: PointSet },
    /// `l = 2m`: an apartment of the parabolic subspace `[M, N]_k`.
    ParabolicApartment {
        lower: Subspace,
        upper: Subspace,
        generators: PointSet,
    },
}

impl ClassificationKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ClassificationKind::StarType { .. } => "StarType",
            ClassificationKind::TopType { .. } => "TopType",
            ClassificationKind::ParabolicApartment { .. } => "ParabolicApartment",
        }
    }

    pub fn generators(&self) -> &PointSet {
        match self {
            ClassificationKind::StarType { points, .. }
            | ClassificationKind::TopType { points, .. }
            | ClassificationKind::ParabolicApartment {
                generators: points, ..
            } => points,
        }
    }

    fn annihilator(&self) -> ClassificationKind {
        match self {
            ClassificationKind::StarType { base, points } => ClassificationKind::TopType {
                roof: base.annihilator(),
                points: points.annihilator(),
            },
            ClassificationKind::TopType { roof, points } => ClassificationKind::StarType {
                base: roof.annihilator(),
                points: points.annihilator(),
            },
            ClassificationKind::ParabolicApartment {
                lower,
                upper,
                generators,
            } => ClassificationKind::ParabolicApartment {
                lower: upper.annihilator(),
                upper: lower.annihilator(),
                generators: generators.annihilator(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub l: usize,
    /// Always `m′`; inputs with `m > l − m` are reindexed by complements.
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub case: Case,
    pub kind: ClassificationKind,
    pub is_full_apartment: bool,
    /// The recovered sets from the generator level up to `𝒥` itself.
    pub descent_trace: Vec<Vec<Subspace>>,
}

impl Classification {
    pub fn generators(&self) -> &PointSet {
        self.kind.generators()
    }

    /// The labeled embedding determined by the recovered data.
    pub fn rebuild(&self) -> Result<EmbeddingInstance> {
        let gens = self.generators();
        match gens.ambient() {
            Ambient::Over(_) => build_sum(gens, self.k),
            Ambient::Under(_) => build_dual(gens, self.k),
        }
    }

    /// The classification of `𝒥⁰`.
    pub fn annihilator(&self) -> Classification {
        Classification {
            l: self.l,
            m: self.m,
            n: self.n,
            k: self.n - self.k,
            case: self.case.flip(),
            kind: self.kind.annihilator(),
            is_full_apartment: self.is_full_apartment,
            descent_trace: annihilate_levels(&self.descent_trace),
        }
    }
}

fn annihilate_levels(levels: &[Vec<Subspace>]) -> Vec<Vec<Subspace>> {
    levels
        .iter()
        .map(|level| {
            let mut out: Vec<Subspace> = level.iter().map(Subspace::annihilator).collect();
            out.sort();
            out
        })
        .collect()
}

struct StarData {
    base: Subspace,
    points: PointSet,
    trace: Vec<Vec<Subspace>>,
}

/// Descends a case-A embedding with `m ≤ l − m` to its generators and checks
/// the structure they must have.
fn recover_star(inst: &EmbeddingInstance) -> Result<StarData> {
    let (l, m, k) = (inst.l(), inst.m(), inst.k());
    let mut trace = vec![inst.image()];
    let mut level = inst.clone();
    while level.m() > 1 {
        level = descend(&level)?;
        trace.push(level.image());
    }
    trace.reverse();
    let gens: Vec<Subspace> = level.map().to_vec();
    let base = Subspace::intersect_all(&gens).expect("nonempty");
    if base.dim() != k - m {
        return Err(Error::Structure(format!(
            "generators meet in dimension {} instead of {}",
            base.dim(),
            k - m
        )));
    }
    let points = PointSet::new(Ambient::Over(base.clone()), gens)?;
    for (v, image) in inst.johnson().vertices().iter().zip(inst.map()) {
        let sum = v
            .indices()
            .iter()
            .fold(base.clone(), |acc, &i| acc.sum_unchecked(&points.points()[i]));
        if &sum != image {
            return Err(Error::Structure(format!("image of {v:?} is not the sum of its generators")));
        }
    }
    if let crate::independence::Independence::Dependent(w) = points.is_m_independent(2 * m)? {
        return Err(Error::Structure(format!("generators {w:?} do not span dimension k + m")));
    }
    let span = Subspace::sum_all(points.points()).expect("nonempty");
    if !(k + m <= span.dim() && span.dim() + m <= k + l) {
        return Err(Error::Structure(format!(
            "generators span dimension {} outside [{}, {}]",
            span.dim(),
            k + m,
            k + l - m
        )));
    }
    Ok(StarData { base, points, trace })
}

/// Recovers the type of an isometric embedding of `J(l, m)`, `1 < m < l − 1`,
/// with `m′ ≤ min(k, n − k)`.
pub fn classify(inst: &EmbeddingInstance) -> Result<Classification> {
    require_fact_range(inst)?;
    require_isometric(inst)?;
    let norm = inst.normalized();
    let (l, m, n, k) = (norm.l(), norm.m(), norm.n(), norm.k());
    if m > k.min(n - k) {
        return Err(Error::pre(format!("m′ = {m} exceeds min(k, n − k) = {}", k.min(n - k))));
    }
    let case = clique_types(&norm)?.case;
    let (kind, descent_trace) = match case {
        Case::A => {
            let star = recover_star(&norm)?;
            let kind = if l == 2 * m {
                let upper = Subspace::sum_all(star.points.points()).expect("nonempty");
                ClassificationKind::ParabolicApartment {
                    lower: star.base,
                    upper,
                    generators: star.points,
                }
            } else {
                ClassificationKind::StarType {
                    base: star.base,
                    points: star.points,
                }
            };
            (kind, star.trace)
        }
        Case::B => {
            let star = recover_star(&norm.annihilator())?;
            let roof = star.base.annihilator();
            let points = star.points.annihilator();
            let kind = if l == 2 * m {
                let lower = Subspace::intersect_all(points.points()).expect("nonempty");
                ClassificationKind::ParabolicApartment {
                    lower,
                    upper: roof,
                    generators: points,
                }
            } else {
                ClassificationKind::TopType { roof, points }
            };
            (kind, annihilate_levels(&star.trace))
        }
    };
    let is_full_apartment = match &kind {
        ClassificationKind::StarType { base, points } => base.is_zero() && points.len() == n && points.is_independent(),
        ClassificationKind::TopType { roof, points } => roof.is_full() && points.len() == n && points.is_independent(),
        ClassificationKind::ParabolicApartment { lower, upper, .. } => lower.is_zero() && upper.is_full(),
    };
    let out = Classification {
        l,
        m,
        n,
        k,
        case,
        kind,
        is_full_apartment,
        descent_trace,
    };
    if out.rebuild()? != norm {
        return Err(Error::Invariant("rebuilt embedding differs from the input".into()));
    }
    Ok(out)
}

/// Classifies an unlabeled image, inferring `(l, m′)` and a labeling first.
pub fn classify_image(image: &[Subspace]) -> Result<Classification> {
    classify(&label_image(image)?)
}

/// Every clique is independent: star members as points of `V/M`, top
/// members as hyperplanes of `N`.
pub fn clique_independence(cliques: &[(CliqueKind, Vec<Subspace>)]) -> Result<bool> {
    for (kind, members) in cliques {
        let ambient = match kind {
            CliqueKind::Star(m) => Ambient::Over(m.clone()),
            CliqueKind::Top(n) => Ambient::Under(n.clone()),
        };
        if !PointSet::new(ambient, members.clone())?.is_independent() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn embedding_clique_independence(inst: &EmbeddingInstance) -> Result<bool> {
    let typing = clique_types(inst)?;
    let cliques: Vec<(CliqueKind, Vec<Subspace>)> = typing
        .cliques
        .into_iter()
        .map(|c| (c.kind, c.members.iter().map(|&i| inst.map()[i].clone()).collect()))
        .collect();
    clique_independence(&cliques)
}
