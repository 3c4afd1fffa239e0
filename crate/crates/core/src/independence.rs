//! Finite point sets in projective spaces and their independence properties.
//!
//! Two kinds of projective space appear as "points" inside `V`:
//!
//! * [`Ambient::Over`]`(M)`: the subspaces of dimension `dim M + 1` containing
//!   `M`, i.e. the projective space of `V/M`. `M = 0` gives `Π_V`.
//! * [`Ambient::Under`]`(N)`: the hyperplanes of `N`, i.e. the dual
//!   projective space of `N`. `N = V` gives `Π*_V`.
//!
//! Rank computations in the second kind go through annihilators so that every
//! rank is the dimension of a sum.

use crate::combinatorics::combinations;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::grassmannian::{extension_vectors, interval};
use crate::matrix::{combine, Matrix};
use crate::subspace::Subspace;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ambient {
    Over(Subspace),
    Under(Subspace),
}

impl Ambient {
    pub fn primal(field: &Field, n: usize) -> Ambient {
        Ambient::Over(Subspace::zero(field, n))
    }

    pub fn dual(field: &Field, n: usize) -> Ambient {
        Ambient::Under(Subspace::full(field, n))
    }

    pub fn base(&self) -> &Subspace {
        match self {
            Ambient::Over(s) | Ambient::Under(s) => s,
        }
    }

    pub fn field(&self) -> &Field {
        self.base().field()
    }

    pub fn n(&self) -> usize {
        self.base().ambient_dim()
    }

    /// Vector-space dimension of the projective space (number of points in a frame).
    pub fn rank(&self) -> usize {
        match self {
            Ambient::Over(m) => m.ambient_dim() - m.dim(),
            Ambient::Under(n) => n.dim(),
        }
    }

    /// Dimension, inside `V`, of the subspaces that are points here.
    pub fn point_dim(&self) -> usize {
        match self {
            Ambient::Over(m) => m.dim() + 1,
            Ambient::Under(n) => n.dim() - 1,
        }
    }

    pub fn is_point(&self, s: &Subspace) -> bool {
        s.field() == self.field()
            && s.ambient_dim() == self.n()
            && s.dim() == self.point_dim()
            && match self {
                Ambient::Over(m) => m.is_subspace_of(s),
                Ambient::Under(n) => s.is_subspace_of(n),
            }
    }

    /// The same geometry seen through annihilators in `V*`.
    pub fn annihilator(&self) -> Ambient {
        match self {
            Ambient::Over(m) => Ambient::Under(m.annihilator()),
            Ambient::Under(n) => Ambient::Over(n.annihilator()),
        }
    }

    /// Every point, in canonical order.
    pub fn points(&self) -> Result<Vec<Subspace>> {
        match self {
            Ambient::Over(m) => interval(m, &Subspace::full(m.field(), m.ambient_dim()), m.dim() + 1),
            Ambient::Under(n) => {
                if n.dim() == 0 {
                    return Err(Error::pre("the zero subspace has no hyperplanes"));
                }
                interval(&Subspace::zero(n.field(), n.ambient_dim()), n, n.dim() - 1)
            }
        }
    }

    /// The point with the given coordinates relative to the ambient's
    /// standard frame (length [`Ambient::rank`]).
    pub fn point_from_frame_coords(&self, coords: &[Elem]) -> Result<Subspace> {
        if coords.len() != self.rank() || coords.iter().all(|&c| c == 0) {
            return Err(Error::pre("frame coordinates must be a nonzero vector of length rank"));
        }
        let field = self.field();
        let n = self.n();
        match self {
            Ambient::Over(m) => {
                let ext = extension_vectors(m, &Subspace::full(field, n));
                let refs: Vec<&[Elem]> = ext.iter().map(|v| v.as_slice()).collect();
                let v = combine(field, coords, &refs, n);
                m.sum(&Subspace::span(field, n, &[v])?)
            }
            Ambient::Under(big) => {
                let ext = extension_vectors(&Subspace::zero(field, n), big);
                // hyperplane {Σ a_j b_j : Σ coords_j a_j = 0}
                let functional = Matrix::from_flat(field, 1, coords.len(), coords.to_vec())?;
                let kernel = functional.right_kernel();
                let refs: Vec<&[Elem]> = ext.iter().map(|v| v.as_slice()).collect();
                let gens: Vec<Vec<Elem>> = kernel.row_iter().map(|a| combine(field, a, &refs, n)).collect();
                if gens.is_empty() {
                    return Ok(Subspace::zero(field, n));
                }
                Subspace::span(field, n, &gens)
            }
        }
    }

    /// `rank` independent points forming the standard frame.
    pub fn frame(&self) -> Result<Vec<Subspace>> {
        (0..self.rank())
            .map(|i| {
                let mut c = vec![0; self.rank()];
                c[i] = 1;
                self.point_from_frame_coords(&c)
            })
            .collect()
    }

    /// A canonical representative vector of a point: a vector spanning it
    /// modulo `M` (Over), or a functional cutting it out of `N` (Under).
    pub fn representative(&self, point: &Subspace) -> Option<Vec<Elem>> {
        match self {
            Ambient::Over(m) => point.representative_over(m),
            Ambient::Under(n) => n.annihilator().representative_over(&point.annihilator()).or_else(|| {
                // point⁰ ⊃ N⁰ with one extra dimension
                point.annihilator().representative_over(&n.annihilator())
            }),
        }
    }

    /// Inverse of [`Ambient::representative`].
    pub fn point_from_representative(&self, v: &[Elem]) -> Result<Subspace> {
        let field = self.field();
        let n = self.n();
        let line = Subspace::span(field, n, &[v])?;
        let point = match self {
            Ambient::Over(m) => m.sum(&line)?,
            Ambient::Under(big) => big.intersect(&line.annihilator())?,
        };
        if !self.is_point(&point) {
            return Err(Error::pre("representative lies in the base subspace"));
        }
        Ok(point)
    }
}

/// An ordered list of distinct points of one projective space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ambient: Ambient,
    points: Vec<Subspace>,
    /// Vectors `r_i` with `point_i = base + ⟨r_i⟩` in the sum model.
    reps: Vec<Vec<Elem>>,
    /// `M` for Over(M), `N⁰` for Under(N).
    sum_base: Subspace,
}

/// Result of an m-independence test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Independence {
    Independent,
    /// Indices of a dependent subset.
    Dependent(Vec<usize>),
}

impl Independence {
    pub fn holds(&self) -> bool {
        matches!(self, Independence::Independent)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimplexRank {
    pub is_simplex: bool,
    /// `|X| − 1` when the set is a simplex.
    pub s: Option<usize>,
}

impl PointSet {
    pub fn new(ambient: Ambient, points: Vec<Subspace>) -> Result<PointSet> {
        for (i, p) in points.iter().enumerate() {
            if !ambient.is_point(p) {
                return Err(Error::pre(format!("element {i} is not a point of the ambient projective space")));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::pre(format!("points {i} and {j} coincide")));
                }
            }
        }
        let (sum_base, reps) = match &ambient {
            Ambient::Over(m) => (
                m.clone(),
                points.iter().map(|p| p.representative_over(m).expect("point over M")).collect(),
            ),
            Ambient::Under(n) => {
                let base = n.annihilator();
                let reps = points
                    .iter()
                    .map(|p| p.annihilator().representative_over(&base).expect("hyperplane of N"))
                    .collect();
                (base, reps)
            }
        };
        Ok(PointSet {
            ambient,
            points,
            reps,
            sum_base,
        })
    }

    pub fn from_representatives<V: AsRef<[Elem]>>(ambient: Ambient, vectors: &[V]) -> Result<PointSet> {
        let points = vectors
            .iter()
            .map(|v| ambient.point_from_representative(v.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        PointSet::new(ambient, points)
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn points(&self) -> &[Subspace] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn representatives(&self) -> Vec<Vec<Elem>> {
        self.points
            .iter()
            .map(|p| self.ambient.representative(p).expect("valid point"))
            .collect()
    }

    /// Projective rank of the listed points (dimension of their span in the
    /// quotient or dual model).
    pub fn rank_of(&self, indices: &[usize]) -> usize {
        if indices.is_empty() {
            return 0;
        }
        let field = self.ambient.field();
        let n = self.ambient.n();
        let base_dim = self.sum_base.dim();
        let mut data: Vec<Elem> = self.sum_base.canonical_rows().to_vec();
        for &i in indices {
            data.extend_from_slice(&self.reps[i]);
        }
        let rows = base_dim + indices.len();
        Matrix::from_flat(field, rows, n, data).expect("valid").rank() - base_dim
    }

    pub fn rank(&self) -> usize {
        self.rank_of(&(0..self.len()).collect::<Vec<_>>())
    }

    pub fn is_independent(&self) -> bool {
        self.rank() == self.len()
    }

    /// Every `m`-subset spans an `m`-dimensional subspace.
    pub fn is_m_independent(&self, m: usize) -> Result<Independence> {
        if m > self.len() {
            return Err(Error::pre(format!("m = {m} exceeds the {} points", self.len())));
        }
        Ok(self.check_subsets(m))
    }

    /// m-independence where a set smaller than `m` must be independent outright.
    pub fn is_m_independent_or_small(&self, m: usize) -> Independence {
        self.check_subsets(m.min(self.len()))
    }

    fn check_subsets(&self, m: usize) -> Independence {
        for subset in combinations(self.len(), m) {
            if self.rank_of(&subset) < m {
                return Independence::Dependent(subset);
            }
        }
        Independence::Independent
    }

    /// A simplex: `s + 1` points, `s`-independent, not independent.
    pub fn simplex_rank(&self) -> SimplexRank {
        let len = self.len();
        if len < 2 {
            return SimplexRank { is_simplex: false, s: None };
        }
        let s = len - 1;
        let is_simplex = !self.is_independent() && self.check_subsets(s).holds();
        SimplexRank {
            is_simplex,
            s: is_simplex.then_some(s),
        }
    }

    /// The same configuration through annihilators, living in `V*`.
    pub fn annihilator(&self) -> PointSet {
        PointSet::new(
            self.ambient.annihilator(),
            self.points.iter().map(Subspace::annihilator).collect(),
        )
        .expect("annihilators of points are points of the dual ambient")
    }

    /// Equality as configurations, ignoring order.
    pub fn same_configuration(&self, other: &PointSet) -> bool {
        let mut a = self.points.clone();
        let mut b = other.points.clone();
        a.sort();
        b.sort();
        self.ambient == other.ambient && a == b
    }
}

/// `s + 1` points: the first `s` frame points and their sum.
pub fn canonical_simplex(ambient: &Ambient, s: usize) -> Result<PointSet> {
    if s < 2 || s > ambient.rank() {
        return Err(Error::pre(format!(
            "simplex rank {s} must lie in 2..={}",
            ambient.rank()
        )));
    }
    let r = ambient.rank();
    let mut points = Vec::with_capacity(s + 1);
    let mut unit = vec![0; r];
    for i in 0..s {
        let mut c = vec![0; r];
        c[i] = 1;
        unit[i] = 1;
        points.push(ambient.point_from_frame_coords(&c)?);
    }
    points.push(ambient.point_from_frame_coords(&unit)?);
    PointSet::new(ambient.clone(), points)
}

/// Outcome of [`search_m_independent`].
#[derive(Debug, Clone)]
pub enum SearchOutcome {
    Found(PointSet),
    /// The search space was exhausted.
    Infeasible { nodes: u64 },
    /// The node budget ran out first.
    Unknown { nodes: u64 },
}

/// Looks for `target` points of `ambient` such that every `min(m, target)` of
/// them are independent. Extends a partial set by any point outside the span
/// of every `(m−1)`-subset, backtracking on failure.
///
/// The first `min(m, target, rank)` points are fixed to the standard frame:
/// the stabilizer of the ambient acts transitively on ordered independent
/// tuples, so this loses no solutions and keeps infeasibility certificates valid.
pub fn search_m_independent(ambient: &Ambient, m: usize, target: usize, budget: u64) -> Result<SearchOutcome> {
    let rank = ambient.rank();
    if m == 0 {
        return Err(Error::pre("m must be positive"));
    }
    let prefix_len = m.min(target).min(rank);
    if m.min(target) > rank {
        return Ok(SearchOutcome::Infeasible { nodes: 0 });
    }
    let frame = ambient.frame()?;
    let prefix: Vec<Subspace> = frame.into_iter().take(prefix_len).collect();
    if target <= prefix_len {
        let set = PointSet::new(ambient.clone(), prefix[..target].to_vec())?;
        return Ok(SearchOutcome::Found(set));
    }
    let candidates: Vec<Subspace> = ambient
        .points()?
        .into_iter()
        .filter(|p| !prefix.contains(p))
        .collect();
    let mut all = prefix.clone();
    all.extend(candidates.iter().cloned());
    let universe = PointSet::new(ambient.clone(), all)?;

    struct Dfs<'a> {
        universe: &'a PointSet,
        m: usize,
        target: usize,
        budget: u64,
        nodes: u64,
    }

    enum Step {
        Found(Vec<usize>),
        Exhausted,
        OutOfBudget,
    }

    impl Dfs<'_> {
        fn admissible(&self, chosen: &[usize], cand: usize) -> bool {
            let size = (chosen.len() + 1).min(self.m);
            combinations(chosen.len(), size - 1).all(|sub| {
                let mut idx: Vec<usize> = sub.iter().map(|&i| chosen[i]).collect();
                idx.push(cand);
                self.universe.rank_of(&idx) == size
            })
        }

        fn run(&mut self, chosen: &mut Vec<usize>, next: usize) -> Step {
            if chosen.len() == self.target {
                return Step::Found(chosen.clone());
            }
            let remaining = self.universe.len() - next;
            if remaining < self.target - chosen.len() {
                return Step::Exhausted;
            }
            for cand in next..self.universe.len() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Step::OutOfBudget;
                }
                if !self.admissible(chosen, cand) {
                    continue;
                }
                chosen.push(cand);
                match self.run(chosen, cand + 1) {
                    Step::Exhausted => {}
                    other => return other,
                }
                chosen.pop();
            }
            Step::Exhausted
        }
    }

    let mut dfs = Dfs {
        universe: &universe,
        m,
        target,
        budget,
        nodes: 0,
    };
    let mut chosen: Vec<usize> = (0..prefix_len).collect();
    Ok(match dfs.run(&mut chosen, prefix_len) {
        Step::Found(idx) => {
            let pts = idx.iter().map(|&i| universe.points()[i].clone()).collect();
            SearchOutcome::Found(PointSet::new(ambient.clone(), pts)?)
        }
        Step::Exhausted => SearchOutcome::Infeasible { nodes: dfs.nodes },
        Step::OutOfBudget => SearchOutcome::Unknown { nodes: dfs.nodes },
    })
}
