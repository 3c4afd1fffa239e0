//! Linear feasibility for semilinear maps `x ↦ σ(x)·A` subject to
//! containment constraints, followed by a search for an invertible solution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combinatorics::digits;
use crate::field::{Elem, Field, FieldAutomorphism};
use crate::matrix::Matrix;
use crate::subspace::Subspace;

/// `σ(x)·A·zᵀ = 0` for every `x ∈ source` and `z ∈ test`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub source: Subspace,
    pub test: Subspace,
}

impl Constraint {
    /// `u(source) ⊆ target` for maps into `V`.
    pub fn maps_into(source: &Subspace, target: &Subspace) -> Constraint {
        Constraint {
            source: source.clone(),
            test: target.annihilator(),
        }
    }

    /// `s(source)⁰ = target` for maps into `V*` with `dim source + dim target = n`.
    pub fn dualizes_to(source: &Subspace, target: &Subspace) -> Constraint {
        Constraint {
            source: source.clone(),
            test: target.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverOptions {
    pub seed: u64,
    /// Solution spaces with at most this many elements are searched exhaustively.
    pub exhaustive_limit: u64,
    /// Samples tried when no probability bound is available.
    pub fallback_samples: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            seed: 0,
            exhaustive_limit: 1 << 20,
            fallback_samples: 4096,
        }
    }
}

/// What the solver did for one field automorphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaAttempt {
    pub frobenius_power: u32,
    pub codomain_is_dual: bool,
    pub unknowns: usize,
    pub constraint_rank: usize,
    pub solution_dim: usize,
    pub exhaustive: bool,
    pub samples: u64,
    /// Largest rank among the solutions examined; `n − max_rank` is the rank defect.
    pub max_rank: usize,
    pub outcome: AttemptOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AttemptOutcome {
    Invertible,
    /// No invertible solution exists (exhaustive, or randomized with failure probability ≤ 2^-40).
    None,
    Unresolved,
}

pub(crate) struct Solved {
    pub attempt: SigmaAttempt,
    pub matrix: Option<Matrix>,
}

fn constraint_rows(field: &Field, n: usize, sigma: FieldAutomorphism, constraints: &[Constraint]) -> Matrix {
    let mut data: Vec<Elem> = Vec::new();
    let mut rows = 0;
    for c in constraints {
        let tests: Vec<&[Elem]> = c.test.basis().collect();
        for x in c.source.basis() {
            let sx: Vec<Elem> = x.iter().map(|&a| sigma.apply(field, a)).collect();
            for z in &tests {
                for r in 0..n {
                    for col in 0..n {
                        data.push(field.mul(sx[r], z[col]));
                    }
                }
                rows += 1;
            }
        }
    }
    Matrix::from_flat(field, rows, n * n, data).expect("consistent shape")
}

/// Basis of all `A` (as `n × n` matrices) satisfying the constraints, and the
/// rank of the constraint system.
pub fn solution_space(
    field: &Field,
    n: usize,
    sigma: FieldAutomorphism,
    constraints: &[Constraint],
) -> (Vec<Matrix>, usize) {
    let system = constraint_rows(field, n, sigma, constraints);
    let rank = system.rank();
    let kernel = if system.rows() == 0 {
        Matrix::identity(field, n * n)
    } else {
        system.right_kernel()
    };
    let basis = kernel
        .row_iter()
        .map(|row| Matrix::from_flat(field, n, n, row.to_vec()).expect("square"))
        .collect();
    (basis, rank)
}

fn add_scaled(field: &Field, acc: &mut [Elem], coeff: Elem, m: &Matrix) {
    if coeff == 0 {
        return;
    }
    for (a, &b) in acc.iter_mut().zip(m.data()) {
        *a = field.add(*a, field.mul(coeff, b));
    }
}

/// Searches the span of `basis` for an invertible matrix.
pub(crate) fn find_invertible(
    field: &Field,
    n: usize,
    basis: &[Matrix],
    opts: &SolverOptions,
    stream: u64,
) -> (Option<Matrix>, bool, u64, usize, AttemptOutcome) {
    let d = basis.len();
    if d == 0 {
        return (None, true, 0, 0, AttemptOutcome::None);
    }
    let q = field.q() as u64;
    let space = (q as f64).powi(d as i32);
    let mut max_rank = 0;
    if space <= opts.exhaustive_limit as f64 {
        let total = q.pow(d as u32);
        let mut acc = vec![0; n * n];
        let mut prev = vec![0u8; d];
        for code in 1..total {
            let cur = digits(code, q, d);
            for i in 0..d {
                if cur[i] != prev[i] {
                    let delta = field.sub(cur[i], prev[i]);
                    add_scaled(field, &mut acc, delta, &basis[i]);
                }
            }
            prev = cur;
            let m = Matrix::from_flat(field, n, n, acc.clone()).expect("square");
            let r = m.rank();
            max_rank = max_rank.max(r);
            if r == n {
                return (Some(m), true, code, max_rank, AttemptOutcome::Invertible);
            }
        }
        return (None, true, total - 1, max_rank, AttemptOutcome::None);
    }
    // det is a nonzero polynomial of degree n in the coordinates whenever an
    // invertible solution exists, so a uniform sample is singular with
    // probability at most n/q
    let certified = q > n as u64;
    let samples = if certified {
        let per = ((q as f64) / (n as f64)).log2();
        (40.0 / per).ceil() as u64
    } else {
        opts.fallback_samples
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(stream);
    for s in 0..samples {
        let mut acc = vec![0; n * n];
        for b in basis {
            let c = rng.gen_range(0..q) as Elem;
            add_scaled(field, &mut acc, c, b);
        }
        let m = Matrix::from_flat(field, n, n, acc).expect("square");
        let r = m.rank();
        max_rank = max_rank.max(r);
        if r == n {
            return (Some(m), false, s + 1, max_rank, AttemptOutcome::Invertible);
        }
    }
    let outcome = if certified {
        AttemptOutcome::None
    } else {
        AttemptOutcome::Unresolved
    };
    (None, false, samples, max_rank, outcome)
}

pub(crate) fn solve(
    field: &Field,
    n: usize,
    sigma: FieldAutomorphism,
    dual: bool,
    constraints: &[Constraint],
    opts: &SolverOptions,
) -> Solved {
    let (basis, constraint_rank) = solution_space(field, n, sigma, constraints);
    let stream = (sigma.frobenius_power as u64) << 1 | dual as u64;
    let (matrix, exhaustive, samples, max_rank, outcome) = find_invertible(field, n, &basis, opts, stream);
    Solved {
        attempt: SigmaAttempt {
            frobenius_power: sigma.frobenius_power,
            codomain_is_dual: dual,
            unknowns: n * n,
            constraint_rank,
            solution_dim: basis.len(),
            exhaustive,
            samples,
            max_rank,
            outcome,
        },
        matrix,
    }
}

/// Number of invertible matrices in the span of `basis`, if the span is small
/// enough to enumerate.
pub(crate) fn count_invertible(field: &Field, n: usize, basis: &[Matrix], limit: u64) -> Option<u64> {
    let q = field.q() as u64;
    let d = basis.len();
    if (q as f64).powi(d as i32) > limit as f64 {
        return None;
    }
    let total = q.pow(d as u32);
    let mut count = 0;
    for code in 1..total {
        let mut acc = vec![0; n * n];
        for (c, b) in digits(code, q, d).into_iter().zip(basis) {
            add_scaled(field, &mut acc, c, b);
        }
        if Matrix::from_flat(field, n, n, acc).expect("square").is_invertible() {
            count += 1;
        }
    }
    Some(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_stabilizer_of_a_frame() {
        let f = Field::prime(3).unwrap();
        let n = 3;
        let cons: Vec<Constraint> = (0..n)
            .map(|i| {
                let p = Subspace::coordinate(&f, n, &[i]);
                Constraint::maps_into(&p, &p)
            })
            .collect();
        let (basis, rank) = solution_space(&f, n, FieldAutomorphism::IDENTITY, &cons);
        assert_eq!(basis.len(), 3);
        assert_eq!(rank, 6);
        // invertible diagonal matrices over GF(3): 2^3
        assert_eq!(count_invertible(&f, n, &basis, 1 << 20), Some(8));
    }

    #[test]
    fn impossible_constraints_have_no_invertible_solution() {
        let f = Field::prime(2).unwrap();
        let a = Subspace::coordinate(&f, 2, &[0]);
        let b = Subspace::coordinate(&f, 2, &[1]);
        // both axes into the first axis
        let cons = vec![Constraint::maps_into(&a, &a), Constraint::maps_into(&b, &a)];
        let s = solve(&f, 2, FieldAutomorphism::IDENTITY, false, &cons, &SolverOptions::default());
        assert!(s.matrix.is_none());
        assert_eq!(s.attempt.outcome, AttemptOutcome::None);
        assert_eq!(s.attempt.max_rank, 1);
    }

    #[test]
    fn randomized_path_is_certified_for_large_fields() {
        let f = Field::new(2, 4).unwrap();
        let opts = SolverOptions {
            exhaustive_limit: 1,
            ..SolverOptions::default()
        };
        let s = solve(&f, 2, FieldAutomorphism::IDENTITY, false, &[], &opts);
        assert!(!s.attempt.exhaustive);
        assert_eq!(s.attempt.outcome, AttemptOutcome::Invertible);
        assert!(s.matrix.unwrap().is_invertible());
    }
}
