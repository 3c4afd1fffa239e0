//! The Grassmannian `G_k(V)` of `V = GF(q)^n`, its graph, and the
//! distinguished subsets: stars, tops, lines, parabolic intervals, apartments.

use std::collections::{HashMap, VecDeque};
use std::sync::OnceLock;

use crate::caps::Caps;
use crate::combinatorics::{combinations, digits};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::subspace::Subspace;

/// `[n choose k]_q`.
pub fn gaussian_binomial(n: u64, k: u64, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num = 1u128;
    let mut den = 1u128;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// All `k`-dimensional subspaces of GF(q)^n, sorted by canonical RREF.
pub fn enumerate(field: &Field, n: usize, k: usize) -> Result<Vec<Subspace>> {
    enumerate_with_caps(field, n, k, &Caps::default())
}

pub fn enumerate_with_caps(field: &Field, n: usize, k: usize, caps: &Caps) -> Result<Vec<Subspace>> {
    caps.check_dim(n)?;
    if k > n {
        return Err(Error::pre(format!("subspace dimension {k} exceeds ambient dimension {n}")));
    }
    let count = gaussian_binomial(n as u64, k as u64, field.q() as u64);
    if count > caps.max_vertices as u128 {
        return Err(Error::CapExceeded(format!(
            "G_{k}(GF({})^{n}) has {count} elements, cap is {}",
            field.q(),
            caps.max_vertices
        )));
    }
    let q = field.q() as u64;
    let mut out = Vec::with_capacity(count as usize);
    for pivots in combinations(n, k) {
        // Free entries: row r, columns right of its pivot that are not pivots.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (p + 1..n).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        for code in 0..q.pow(free.len() as u32) {
            let vals = digits(code, q, free.len());
            let mut rows = vec![0 as Elem; k * n];
            for (r, &p) in pivots.iter().enumerate() {
                rows[r * n + p] = 1;
            }
            for (&(r, c), &v) in free.iter().zip(&vals) {
                rows[r * n + c] = v;
            }
            out.push(Subspace::from_canonical_rows(field, n, rows));
        }
    }
    out.sort();
    if out.len() as u128 != count {
        return Err(Error::Invariant(format!(
            "enumerated {} subspaces, expected {count}",
            out.len()
        )));
    }
    Ok(out)
}

fn check_same_grassmannian(s: &Subspace, u: &Subspace) -> Result<()> {
    if s.ambient_dim() != u.ambient_dim() {
        return Err(Error::AmbientMismatch(s.ambient_dim(), u.ambient_dim()));
    }
    if s.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.dim(),
            found: u.dim(),
        });
    }
    if s.field() != u.field() {
        return Err(Error::FieldMismatch(s.field().q() as u32, u.field().q() as u32));
    }
    Ok(())
}

/// Grassmann distance `dim(S + U) − k`.
pub fn distance(s: &Subspace, u: &Subspace) -> Result<usize> {
    check_same_grassmannian(s, u)?;
    Ok(s.sum_dim(u) - s.dim())
}

pub fn adjacent(s: &Subspace, u: &Subspace) -> Result<bool> {
    Ok(distance(s, u)? == 1)
}

/// A maximal clique of a Grassmann graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CliqueKind {
    /// All k-subspaces containing a (k−1)-subspace.
    Star(Subspace),
    /// All k-subspaces inside a (k+1)-subspace.
    Top(Subspace),
}

impl CliqueKind {
    pub fn is_star(&self) -> bool {
        matches!(self, CliqueKind::Star(_))
    }

    pub fn center(&self) -> &Subspace {
        match self {
            CliqueKind::Star(s) | CliqueKind::Top(s) => s,
        }
    }

    pub fn contains(&self, s: &Subspace) -> bool {
        match self {
            CliqueKind::Star(m) => m.is_subspace_of(s),
            CliqueKind::Top(n) => s.is_subspace_of(n),
        }
    }
}

/// Basis vectors extending `lower` to a basis of `upper`.
pub(crate) fn extension_vectors(lower: &Subspace, upper: &Subspace) -> Vec<Vec<Elem>> {
    let mut acc = lower.clone();
    let mut out = Vec::new();
    for row in upper.basis() {
        if !acc.contains_vector(row) {
            out.push(row.to_vec());
            acc = acc.sum_unchecked(&Subspace::span(upper.field(), upper.ambient_dim(), &[row]).expect("row"));
        }
    }
    out
}

/// Every k-subspace S with `lower ⊆ S ⊆ upper`, without the strictness check.
pub(crate) fn interval(lower: &Subspace, upper: &Subspace, k: usize) -> Result<Vec<Subspace>> {
    if !lower.is_subspace_of(upper) {
        return Err(Error::pre("lower subspace is not contained in the upper one"));
    }
    if k < lower.dim() || k > upper.dim() {
        return Err(Error::pre(format!(
            "dimension {k} outside [{}, {}]",
            lower.dim(),
            upper.dim()
        )));
    }
    let field = lower.field();
    let n = lower.ambient_dim();
    let ext = extension_vectors(lower, upper);
    let quotient = enumerate(field, ext.len(), k - lower.dim())?;
    let lower_rows: Vec<Vec<Elem>> = lower.basis().map(|r| r.to_vec()).collect();
    let mut out: Vec<Subspace> = quotient
        .iter()
        .map(|t| {
            let mut gens = lower_rows.clone();
            for coeffs in t.basis() {
                let refs: Vec<&[Elem]> = ext.iter().map(|v| v.as_slice()).collect();
                gens.push(crate::matrix::combine(field, coeffs, &refs, n));
            }
            Subspace::span(field, n, &gens).expect("valid generators")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// The parabolic interval `[M, N]_k`; requires `M ⊂ N` and `dim M < k < dim N`.
pub fn parabolic_interval(lower: &Subspace, upper: &Subspace, k: usize) -> Result<Vec<Subspace>> {
    if !(lower.dim() < k && k < upper.dim()) {
        return Err(Error::pre(format!(
            "parabolic interval needs dim M < k < dim N, got {} < {k} < {}",
            lower.dim(),
            upper.dim()
        )));
    }
    interval(lower, upper, k)
}

/// The star `[M⟩_k`, `k = dim M + 1`.
pub fn star(center: &Subspace) -> Result<Vec<Subspace>> {
    let full = Subspace::full(center.field(), center.ambient_dim());
    parabolic_interval(center, &full, center.dim() + 1)
}

/// The top `⟨N]_k`, `k = dim N − 1`.
pub fn top(roof: &Subspace) -> Result<Vec<Subspace>> {
    if roof.dim() < 2 {
        return Err(Error::pre("a top needs a subspace of dimension at least 2"));
    }
    let zero = Subspace::zero(roof.field(), roof.ambient_dim());
    parabolic_interval(&zero, roof, roof.dim() - 1)
}

/// The apartment of `G_k(V)` spanned by a frame of `n` independent points, in
/// lexicographic order of the index subsets.
pub fn apartment_from_frame(points: &[Subspace], k: usize) -> Result<Vec<Subspace>> {
    let first = points.first().ok_or_else(|| Error::pre("empty frame"))?;
    let n = first.ambient_dim();
    if points.len() != n {
        return Err(Error::pre(format!("a frame of GF(q)^{n} has {n} points, got {}", points.len())));
    }
    if points.iter().any(|p| p.dim() != 1 || p.ambient_dim() != n) {
        return Err(Error::pre("frame members must be points of the same space"));
    }
    let span = Subspace::sum_all(points).expect("nonempty");
    if span.dim() != n {
        return Err(Error::NotIndependent {
            m: n,
            witness: (0..n).collect(),
        });
    }
    if k > n {
        return Err(Error::pre("k exceeds n"));
    }
    Ok(combinations(n, k)
        .map(|idx| Subspace::sum_all(idx.iter().map(|&i| &points[i])).unwrap_or_else(|| Subspace::zero(first.field(), n)))
        .collect())
}

/// Every maximal clique of `Γ_k(V)` containing the pairwise adjacent set `clique`.
///
/// A set lying on a line is contained in both the star and the top through
/// that line, so both are returned.
pub fn classify_max_cliques_containing(clique: &[Subspace]) -> Result<Vec<CliqueKind>> {
    if clique.len() < 3 {
        return Err(Error::pre("need at least three mutually adjacent subspaces"));
    }
    let n = clique[0].ambient_dim();
    let k = clique[0].dim();
    if !(1 < k && k + 1 < n) {
        return Err(Error::pre(format!("clique typing needs 1 < k < n − 1, got k = {k}, n = {n}")));
    }
    for i in 0..clique.len() {
        for j in i + 1..clique.len() {
            if distance(&clique[i], &clique[j])? != 1 {
                return Err(Error::NotPairwiseAdjacent(i, j));
            }
        }
    }
    let meet = Subspace::intersect_all(clique).expect("nonempty");
    let join = Subspace::sum_all(clique).expect("nonempty");
    let mut out = Vec::new();
    if meet.dim() == k - 1 {
        out.push(CliqueKind::Star(meet));
    }
    if join.dim() == k + 1 {
        out.push(CliqueKind::Top(join));
    }
    if out.is_empty() {
        return Err(Error::Invariant("pairwise adjacent set is neither in a star nor a top".into()));
    }
    Ok(out)
}

/// `G_k(V)` materialized with a dense index in canonical order.
pub struct Grassmannian {
    field: Field,
    n: usize,
    k: usize,
    elements: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    distances: OnceLock<Vec<u8>>,
}

impl std::fmt::Debug for Grassmannian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "G_{}(GF({})^{}) [{} elements]", self.k, self.field.q(), self.n, self.elements.len())
    }
}

impl Grassmannian {
    pub fn new(field: &Field, n: usize, k: usize) -> Result<Grassmannian> {
        Grassmannian::with_caps(field, n, k, &Caps::default())
    }

    pub fn with_caps(field: &Field, n: usize, k: usize, caps: &Caps) -> Result<Grassmannian> {
        let elements = enumerate_with_caps(field, n, k, caps)?;
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Ok(Grassmannian {
            field: field.clone(),
            n,
            k,
            elements,
            index,
            distances: OnceLock::new(),
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn get(&self, id: u32) -> &Subspace {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, s: &Subspace) -> Option<u32> {
        self.index.get(s).copied()
    }

    /// True for `1 < k < n − 1`, where the maximal cliques come in two kinds.
    pub fn has_two_clique_types(&self) -> bool {
        1 < self.k && self.k + 1 < self.n
    }

    /// Flat `len × len` table of Grassmann distances, built on first use.
    pub fn distance_table(&self) -> &[u8] {
        self.distances.get_or_init(|| {
            let len = self.elements.len();
            let mut table = vec![0u8; len * len];
            for i in 0..len {
                for j in i + 1..len {
                    let d = (self.elements[i].sum_dim(&self.elements[j]) - self.k) as u8;
                    table[i * len + j] = d;
                    table[j * len + i] = d;
                }
            }
            table
        })
    }

    #[inline]
    pub fn dist(&self, a: u32, b: u32) -> u8 {
        self.distance_table()[a as usize * self.elements.len() + b as usize]
    }

    pub fn neighbors(&self) -> Vec<Vec<u32>> {
        let len = self.elements.len();
        let table = self.distance_table();
        (0..len)
            .map(|i| (0..len).filter(|&j| table[i * len + j] == 1).map(|j| j as u32).collect())
            .collect()
    }

    /// Breadth-first distances from one vertex in the adjacency graph.
    pub fn bfs_from(&self, source: u32) -> Vec<Option<u32>> {
        let nbrs = self.neighbors();
        bfs(&nbrs, source)
    }

    pub fn star(&self, center: &Subspace) -> Result<Vec<Subspace>> {
        if center.dim() + 1 != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k - 1,
                found: center.dim(),
            });
        }
        star(center)
    }

    pub fn top(&self, roof: &Subspace) -> Result<Vec<Subspace>> {
        if roof.dim() != self.k + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.k + 1,
                found: roof.dim(),
            });
        }
        top(roof)
    }
}

pub(crate) fn bfs(nbrs: &[Vec<u32>], source: u32) -> Vec<Option<u32>> {
    let mut dist = vec![None; nbrs.len()];
    dist[source as usize] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize].unwrap();
        for &w in &nbrs[v as usize] {
            if dist[w as usize].is_none() {
                dist[w as usize] = Some(d + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        // (2^4−1)(2^4−2)/((2^2−1)(2^2−2)) = 35 and (3^3−1)/(3−1) = 13
        assert_eq!(enumerate(&gf(2), 4, 2).unwrap().len(), 35);
        assert_eq!(enumerate(&gf(3), 3, 1).unwrap().len(), 13);
        let whole = enumerate(&gf(2), 4, 4).unwrap();
        assert_eq!(whole.len(), 1);
        assert!(whole[0].is_full());
        assert_eq!(enumerate(&gf(2), 4, 0).unwrap(), vec![Subspace::zero(&gf(2), 4)]);
    }

    #[test]
    fn enumeration_is_sorted_and_distinct() {
        let all = enumerate(&gf(3), 4, 2).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn caps_are_enforced() {
        let tight = Caps {
            max_vertices: 10,
            ..Caps::default()
        };
        assert!(matches!(enumerate_with_caps(&gf(2), 4, 2, &tight), Err(Error::CapExceeded(_))));
        assert!(matches!(enumerate(&gf(2), 9, 1), Err(Error::CapExceeded(_))));
    }

    #[test]
    fn distance_examples() {
        let f = gf(2);
        let a = Subspace::coordinate(&f, 4, &[0, 1]);
        let b = Subspace::coordinate(&f, 4, &[2, 3]);
        let c = Subspace::coordinate(&f, 4, &[1, 2]);
        assert_eq!(distance(&a, &a).unwrap(), 0);
        assert_eq!(distance(&a, &b).unwrap(), 2);
        assert_eq!(distance(&a, &c).unwrap(), 1);
        assert!(!adjacent(&a, &a).unwrap());
        assert!(!adjacent(&a, &b).unwrap());
        assert!(adjacent(&a, &c).unwrap());
        assert!(distance(&a, &Subspace::coordinate(&f, 4, &[0])).is_err());
    }

    #[test]
    fn star_top_and_line_sizes() {
        let f = gf(2);
        let m = Subspace::coordinate(&f, 4, &[0]);
        let n = Subspace::coordinate(&f, 4, &[0, 1, 2]);
        let s = star(&m).unwrap();
        let t = top(&n).unwrap();
        assert_eq!(s.len(), 7);
        assert_eq!(t.len(), 7);
        let line: Vec<_> = s.iter().filter(|x| t.contains(x)).cloned().collect();
        assert_eq!(line.len(), 3);
        assert_eq!(line, parabolic_interval(&m, &n, 2).unwrap());
        let g = Grassmannian::new(&f, 4, 2).unwrap();
        assert!(g.star(&n).is_err());
        assert!(g.top(&m).is_err());
    }

    #[test]
    fn parabolic_examples() {
        let f = gf(2);
        let zero = Subspace::zero(&f, 4);
        let full = Subspace::full(&f, 4);
        assert_eq!(parabolic_interval(&zero, &full, 2).unwrap(), enumerate(&f, 4, 2).unwrap());
        let m = Subspace::coordinate(&f, 5, &[0]);
        let n = Subspace::coordinate(&f, 5, &[0, 1, 2, 3]);
        let interval = parabolic_interval(&m, &n, 2).unwrap();
        // exhaustive filter over G_2(GF(2)^5)
        let filtered: Vec<_> = enumerate(&f, 5, 2)
            .unwrap()
            .into_iter()
            .filter(|s| m.is_subspace_of(s) && s.is_subspace_of(&n))
            .collect();
        assert_eq!(interval, filtered);
        assert_eq!(interval.len(), 7);
        assert!(parabolic_interval(&n, &m, 2).is_err());
        assert!(parabolic_interval(&m, &n, 1).is_err());
    }

    #[test]
    fn apartment_examples() {
        let f = gf(2);
        let frame: Vec<_> = (0..4).map(|i| Subspace::coordinate(&f, 4, &[i])).collect();
        let planes = apartment_from_frame(&frame, 2).unwrap();
        assert_eq!(planes.len(), 6);
        assert_eq!(planes[0], Subspace::coordinate(&f, 4, &[0, 1]));
        assert_eq!(apartment_from_frame(&frame, 1).unwrap(), frame);
        let mut dependent = frame.clone();
        dependent[3] = Subspace::span(&f, 4, &[[1u8, 1, 0, 0]]).unwrap();
        assert!(apartment_from_frame(&dependent, 2).is_err());
    }

    #[test]
    fn clique_classification() {
        let f = gf(2);
        let s = |v: &[[u8; 4]]| Subspace::span(&f, 4, v).unwrap();
        // through M = ⟨e1⟩, spanning all of V
        let star_only = [s(&[[1, 0, 0, 0], [0, 1, 0, 0]]), s(&[[1, 0, 0, 0], [0, 0, 1, 0]]), s(&[[1, 0, 0, 0], [0, 0, 0, 1]])];
        assert_eq!(
            classify_max_cliques_containing(&star_only).unwrap(),
            vec![CliqueKind::Star(Subspace::coordinate(&f, 4, &[0]))]
        );
        // inside N = ⟨e1,e2,e3⟩, pairwise distinct intersections
        let top_only = [s(&[[1, 0, 0, 0], [0, 1, 0, 0]]), s(&[[1, 0, 0, 0], [0, 0, 1, 0]]), s(&[[0, 1, 0, 0], [0, 0, 1, 0]])];
        assert_eq!(
            classify_max_cliques_containing(&top_only).unwrap(),
            vec![CliqueKind::Top(Subspace::coordinate(&f, 4, &[0, 1, 2]))]
        );
        // a whole line: both
        let m = Subspace::coordinate(&f, 4, &[0]);
        let n = Subspace::coordinate(&f, 4, &[0, 1, 2]);
        let line = parabolic_interval(&m, &n, 2).unwrap();
        let kinds = classify_max_cliques_containing(&line).unwrap();
        assert_eq!(kinds, vec![CliqueKind::Star(m), CliqueKind::Top(n)]);
        let far = [s(&[[1, 0, 0, 0], [0, 1, 0, 0]]), s(&[[0, 0, 1, 0], [0, 0, 0, 1]]), s(&[[1, 0, 0, 0], [0, 0, 1, 0]])];
        assert!(matches!(classify_max_cliques_containing(&far), Err(Error::NotPairwiseAdjacent(0, 1))));
    }
}
