//! Johnson graphs `J(l, m)` and their automorphisms.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations, factorial};
use crate::error::{Error, Result};

pub const MAX_GROUND: usize = 64;

/// An `m`-subset of `{0, …, l−1}` as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JohnsonVertex(pub u64);

impl JohnsonVertex {
    pub fn from_indices(indices: &[usize]) -> JohnsonVertex {
        JohnsonVertex(indices.iter().fold(0u64, |acc, &i| acc | 1 << i))
    }

    pub fn indices(self) -> Vec<usize> {
        (0..MAX_GROUND).filter(|&i| self.0 >> i & 1 == 1).collect()
    }

    pub fn size(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
}

impl fmt::Debug for JohnsonVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// `J(l, m)` with vertices in lexicographic order of their sorted index lists.
#[derive(Clone)]
pub struct JohnsonGraph {
    l: usize,
    m: usize,
    vertices: Vec<JohnsonVertex>,
    index: HashMap<JohnsonVertex, usize>,
}

impl fmt::Debug for JohnsonGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J({}, {})", self.l, self.m)
    }
}

impl PartialEq for JohnsonGraph {
    fn eq(&self, other: &Self) -> bool {
        self.l == other.l && self.m == other.m
    }
}

impl Eq for JohnsonGraph {}

impl JohnsonGraph {
    pub fn new(l: usize, m: usize) -> Result<JohnsonGraph> {
        if !(0 < m && m < l) || l > MAX_GROUND {
            return Err(Error::pre(format!("J(l, m) needs 0 < m < l ≤ {MAX_GROUND}, got J({l}, {m})")));
        }
        let vertices: Vec<JohnsonVertex> = combinations(l, m).map(|c| JohnsonVertex::from_indices(&c)).collect();
        let index = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        Ok(JohnsonGraph { l, m, vertices, index })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `min(m, l − m)`, the diameter.
    pub fn m_prime(&self) -> usize {
        self.m.min(self.l - self.m)
    }

    pub fn vertices(&self) -> &[JohnsonVertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn index_of(&self, v: JohnsonVertex) -> Option<usize> {
        self.index.get(&v).copied()
    }

    pub fn distance(&self, a: JohnsonVertex, b: JohnsonVertex) -> Result<usize> {
        if a.size() != self.m || b.size() != self.m || (a.0 | b.0) >> self.l != 0 {
            return Err(Error::pre(format!("vertices {a:?}, {b:?} are not in {self:?}")));
        }
        Ok(johnson_distance(a, b))
    }

    pub fn full_mask(&self) -> u64 {
        if self.l == 64 {
            u64::MAX
        } else {
            (1u64 << self.l) - 1
        }
    }

    pub fn complement(&self, v: JohnsonVertex) -> JohnsonVertex {
        JohnsonVertex(!v.0 & self.full_mask())
    }

    /// Flat distance table indexed by vertex positions.
    pub fn distance_table(&self) -> Vec<u8> {
        let n = self.vertices.len();
        let mut t = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                t[i * n + j] = johnson_distance(self.vertices[i], self.vertices[j]) as u8;
            }
        }
        t
    }

    pub fn neighbors(&self) -> Vec<Vec<u32>> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| johnson_distance(self.vertices[i], self.vertices[j]) == 1)
                    .map(|j| j as u32)
                    .collect()
            })
            .collect()
    }

    /// Maximal cliques of the form `{A : S ⊂ A}` with `|S| = m − 1`.
    pub fn star_cliques(&self) -> Vec<(JohnsonVertex, Vec<usize>)> {
        combinations(self.l, self.m - 1)
            .map(|c| {
                let s = JohnsonVertex::from_indices(&c);
                let members = (0..self.l)
                    .filter(|&j| !s.contains(j))
                    .map(|j| self.index[&JohnsonVertex(s.0 | 1 << j)])
                    .collect();
                (s, members)
            })
            .collect()
    }

    /// Maximal cliques of the form `{A : A ⊂ U}` with `|U| = m + 1`.
    pub fn top_cliques(&self) -> Vec<(JohnsonVertex, Vec<usize>)> {
        combinations(self.l, self.m + 1)
            .map(|c| {
                let u = JohnsonVertex::from_indices(&c);
                let members = c
                    .iter()
                    .map(|&j| self.index[&JohnsonVertex(u.0 & !(1 << j))])
                    .collect();
                (u, members)
            })
            .collect()
    }

    /// Order of the automorphism group for `1 < m < l − 1`.
    pub fn aut_group_order(&self) -> Result<u128> {
        self.require_nondegenerate()?;
        let base = factorial(self.l as u64);
        Ok(if self.l == 2 * self.m { 2 * base } else { base })
    }

    /// Generators: adjacent transpositions of the ground set, plus
    /// complementation when `l = 2m`.
    pub fn aut_generators(&self) -> Result<Vec<JohnsonAut>> {
        self.require_nondegenerate()?;
        let mut gens: Vec<JohnsonAut> = (0..self.l - 1)
            .map(|i| JohnsonAut::transposition(self.l, i, i + 1))
            .collect();
        if self.l == 2 * self.m {
            gens.push(JohnsonAut::complementation(self.l));
        }
        Ok(gens)
    }

    fn require_nondegenerate(&self) -> Result<()> {
        if !(1 < self.m && self.m + 1 < self.l) {
            return Err(Error::pre(format!("automorphism description needs 1 < m < l − 1, got {self:?}")));
        }
        Ok(())
    }

    pub fn vertex_count(l: usize, m: usize) -> u128 {
        binomial(l as u64, m as u64)
    }
}

#[inline]
pub fn johnson_distance(a: JohnsonVertex, b: JohnsonVertex) -> usize {
    a.size() - (a.0 & b.0).count_ones() as usize
}

/// A permutation of the ground set, optionally followed by complementation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JohnsonAut {
    pub perm: Vec<usize>,
    pub complement: bool,
}

impl JohnsonAut {
    pub fn identity(l: usize) -> JohnsonAut {
        JohnsonAut {
            perm: (0..l).collect(),
            complement: false,
        }
    }

    pub fn transposition(l: usize, a: usize, b: usize) -> JohnsonAut {
        let mut perm: Vec<usize> = (0..l).collect();
        perm.swap(a, b);
        JohnsonAut { perm, complement: false }
    }

    pub fn complementation(l: usize) -> JohnsonAut {
        JohnsonAut {
            perm: (0..l).collect(),
            complement: true,
        }
    }

    pub fn is_identity(&self) -> bool {
        !self.complement && self.perm.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn apply(&self, graph: &JohnsonGraph, v: JohnsonVertex) -> JohnsonVertex {
        let mut out = 0u64;
        for i in 0..graph.l() {
            if v.contains(i) {
                out |= 1 << self.perm[i];
            }
        }
        let out = JohnsonVertex(out);
        if self.complement {
            graph.complement(out)
        } else {
            out
        }
    }

    /// The induced permutation of vertex positions.
    pub fn vertex_permutation(&self, graph: &JohnsonGraph) -> Result<Vec<usize>> {
        if self.perm.len() != graph.l() {
            return Err(Error::pre("automorphism acts on a different ground set"));
        }
        if self.complement && graph.l() != 2 * graph.m() {
            return Err(Error::pre("complementation is an automorphism only when l = 2m"));
        }
        graph
            .vertices()
            .iter()
            .map(|&v| {
                graph
                    .index_of(self.apply(graph, v))
                    .ok_or_else(|| Error::pre(format!("{:?} is not a permutation", self.perm)))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmannian::bfs;

    #[test]
    fn vertex_counts() {
        assert_eq!(JohnsonGraph::new(4, 2).unwrap().len(), 6);
        assert_eq!(JohnsonGraph::new(5, 2).unwrap().len(), 10);
        assert_eq!(JohnsonGraph::new(7, 6).unwrap().len(), 7);
        assert!(JohnsonGraph::new(4, 0).is_err());
        assert!(JohnsonGraph::new(4, 4).is_err());
        assert!(JohnsonGraph::new(65, 2).is_err());
    }

    #[test]
    fn distances() {
        let g = JohnsonGraph::new(4, 2).unwrap();
        let v = |x: &[usize]| JohnsonVertex::from_indices(x);
        assert_eq!(g.distance(v(&[0, 1]), v(&[0, 1])).unwrap(), 0);
        assert_eq!(g.distance(v(&[0, 1]), v(&[2, 3])).unwrap(), 2);
        assert_eq!(g.distance(v(&[0, 1]), v(&[1, 2])).unwrap(), 1);
        assert!(g.distance(v(&[0]), v(&[1, 2])).is_err());
        assert_eq!(g.vertices()[0], v(&[0, 1]));
        assert_eq!(g.vertices()[5], v(&[2, 3]));
    }

    #[test]
    fn distance_equals_bfs() {
        for l in 2..=8 {
            for m in 1..l {
                let g = JohnsonGraph::new(l, m).unwrap();
                let nb = g.neighbors();
                let table = g.distance_table();
                for s in 0..g.len() {
                    let d = bfs(&nb, s as u32);
                    for t in 0..g.len() {
                        assert_eq!(d[t], Some(table[s * g.len() + t] as u32));
                    }
                }
            }
        }
    }

    #[test]
    fn generators_and_orders() {
        let g = JohnsonGraph::new(5, 2).unwrap();
        assert_eq!(g.aut_group_order().unwrap(), 120);
        assert_eq!(g.aut_generators().unwrap().len(), 4);
        let h = JohnsonGraph::new(4, 2).unwrap();
        assert_eq!(h.aut_group_order().unwrap(), 48);
        assert!(h.aut_generators().unwrap().iter().any(|a| a.complement));
        assert!(JohnsonGraph::new(4, 1).unwrap().aut_generators().is_err());
        let id = JohnsonAut::identity(5);
        assert!(id.is_identity());
        assert_eq!(id.vertex_permutation(&g).unwrap(), (0..10).collect::<Vec<_>>());
        assert!(JohnsonAut::complementation(5).vertex_permutation(&g).is_err());
    }

    #[test]
    fn automorphisms_preserve_adjacency() {
        let g = JohnsonGraph::new(6, 3).unwrap();
        let table = g.distance_table();
        for a in g.aut_generators().unwrap() {
            let p = a.vertex_permutation(&g).unwrap();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    assert_eq!(table[i * g.len() + j], table[p[i] * g.len() + p[j]]);
                }
            }
        }
    }

    #[test]
    fn cliques_have_expected_sizes() {
        let g = JohnsonGraph::new(6, 2).unwrap();
        assert!(g.star_cliques().iter().all(|(_, c)| c.len() == 5));
        assert!(g.top_cliques().iter().all(|(_, c)| c.len() == 3));
        assert_eq!(g.star_cliques().len(), 6);
        assert_eq!(g.top_cliques().len(), 20);
    }
}
