//! Isometric embeddings of Johnson graphs into Grassmann graphs.

mod classify;
mod construct;
mod labeling;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::grassmannian::distance;
use crate::johnson::{JohnsonGraph, JohnsonVertex};
use crate::subspace::Subspace;

pub use classify::{
    classify, classify_image, clique_independence, clique_types, descend, embedding_clique_independence, Case,
    Classification, ClassificationKind, CliqueTyping,
};
pub use construct::{build_apartment, build_dual, build_simplex_faces, build_sum};
pub use labeling::{infer_johnson_parameters, label_image};

/// A pair of Johnson vertices whose distance is not preserved.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub expected: usize,
    pub actual: usize,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} and {:?} are at Johnson distance {} but their images are at distance {}",
            self.a, self.b, self.expected, self.actual
        )
    }
}

/// A total map from the vertices of `J(l, m)` to `k`-subspaces of `GF(q)^n`.
#[derive(Clone, PartialEq, Eq)]
pub struct EmbeddingInstance {
    johnson: JohnsonGraph,
    field: Field,
    n: usize,
    k: usize,
    map: Vec<Subspace>,
}

impl fmt::Debug for EmbeddingInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} -> G_{}(GF({})^{})",
            self.johnson,
            self.k,
            self.field.q(),
            self.n
        )
    }
}

impl EmbeddingInstance {
    /// `map[i]` is the image of `johnson.vertices()[i]`.
    pub fn new(johnson: JohnsonGraph, map: Vec<Subspace>) -> Result<EmbeddingInstance> {
        if map.len() != johnson.len() {
            return Err(Error::DimensionMismatch {
                expected: johnson.len(),
                found: map.len(),
            });
        }
        let first = &map[0];
        let (field, n, k) = (first.field().clone(), first.ambient_dim(), first.dim());
        for s in &map {
            if s.field() != &field {
                return Err(Error::FieldMismatch(s.field().q() as u32, field.q() as u32));
            }
            if s.ambient_dim() != n {
                return Err(Error::AmbientMismatch(s.ambient_dim(), n));
            }
            if s.dim() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: s.dim(),
                });
            }
        }
        Ok(EmbeddingInstance {
            johnson,
            field,
            n,
            k,
            map,
        })
    }

    pub fn from_fn(johnson: JohnsonGraph, f: impl FnMut(JohnsonVertex) -> Subspace) -> Result<EmbeddingInstance> {
        let map = johnson.vertices().iter().copied().map(f).collect();
        EmbeddingInstance::new(johnson, map)
    }

    pub fn johnson(&self) -> &JohnsonGraph {
        &self.johnson
    }

    pub fn l(&self) -> usize {
        self.johnson.l()
    }

    pub fn m(&self) -> usize {
        self.johnson.m()
    }

    pub fn m_prime(&self) -> usize {
        self.johnson.m_prime()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn map(&self) -> &[Subspace] {
        &self.map
    }

    pub fn get(&self, v: JohnsonVertex) -> Option<&Subspace> {
        self.johnson.index_of(v).map(|i| &self.map[i])
    }

    /// The image as a sorted, duplicate-free list.
    pub fn image(&self) -> Vec<Subspace> {
        let mut out = self.map.clone();
        out.sort();
        out.dedup();
        out
    }

    /// Reindexes through `A ↦ complement(A)` when `m > l − m`, so that the
    /// result has `m = m′`.
    pub fn normalized(&self) -> EmbeddingInstance {
        if self.m() <= self.l() - self.m() {
            return self.clone();
        }
        let target = JohnsonGraph::new(self.l(), self.l() - self.m()).expect("valid complement parameters");
        let map = target
            .vertices()
            .iter()
            .map(|&v| self.get(self.johnson.complement(v)).expect("complement is a vertex").clone())
            .collect();
        EmbeddingInstance {
            johnson: target,
            field: self.field.clone(),
            n: self.n,
            k: self.k,
            map,
        }
    }

    /// `A ↦ f(A)⁰`, an embedding into `G_{n−k}(V*)`.
    pub fn annihilator(&self) -> EmbeddingInstance {
        EmbeddingInstance {
            johnson: self.johnson.clone(),
            field: self.field.clone(),
            n: self.n,
            k: self.n - self.k,
            map: self.map.iter().map(Subspace::annihilator).collect(),
        }
    }
}

/// Checks `d_m(A, B) = d_k(f(A), f(B))` for every pair, reporting the first
/// failure in lexicographic pair order.
pub fn verify_isometric(inst: &EmbeddingInstance) -> std::result::Result<(), Counterexample> {
    let verts = inst.johnson.vertices();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let expected = crate::johnson::johnson_distance(verts[i], verts[j]);
            let actual = distance(&inst.map[i], &inst.map[j]).expect("uniform dimensions");
            if expected != actual {
                return Err(Counterexample {
                    a: verts[i].indices(),
                    b: verts[j].indices(),
                    expected,
                    actual,
                });
            }
        }
    }
    Ok(())
}

pub(crate) fn require_isometric(inst: &EmbeddingInstance) -> Result<()> {
    verify_isometric(inst).map_err(Error::NotIsometric)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmannian::apartment_from_frame;

    fn gf2() -> Field {
        Field::prime(2).unwrap()
    }

    fn standard_apartment(n: usize, k: usize) -> EmbeddingInstance {
        let f = gf2();
        let frame: Vec<Subspace> = (0..n).map(|i| Subspace::coordinate(&f, n, &[i])).collect();
        let j = JohnsonGraph::new(n, k).unwrap();
        EmbeddingInstance::new(j, apartment_from_frame(&frame, k).unwrap()).unwrap()
    }

    #[test]
    fn apartment_is_isometric() {
        assert_eq!(verify_isometric(&standard_apartment(4, 2)), Ok(()));
        assert_eq!(verify_isometric(&standard_apartment(5, 3)), Ok(()));
    }

    #[test]
    fn swapped_images_give_counterexample() {
        let inst = standard_apartment(5, 2);
        let mut map = inst.map().to_vec();
        // {0,1} now maps to <e1,e2>, still adjacent to the image of {0,2}
        map.swap(0, 4);
        let bad = EmbeddingInstance::new(inst.johnson().clone(), map).unwrap();
        let ce = verify_isometric(&bad).unwrap_err();
        assert_eq!((ce.a, ce.b, ce.expected, ce.actual), (vec![0, 1], vec![0, 3], 1, 2));
    }

    #[test]
    fn constant_map_fails_at_first_adjacent_pair() {
        let f = gf2();
        let j = JohnsonGraph::new(4, 2).unwrap();
        let s = Subspace::coordinate(&f, 4, &[0, 1]);
        let inst = EmbeddingInstance::new(j, vec![s; 6]).unwrap();
        let ce = verify_isometric(&inst).unwrap_err();
        assert_eq!((ce.a, ce.b, ce.expected, ce.actual), (vec![0, 1], vec![0, 2], 1, 0));
    }

    #[test]
    fn shape_is_checked() {
        let f = gf2();
        let j = JohnsonGraph::new(4, 2).unwrap();
        assert!(EmbeddingInstance::new(j.clone(), vec![Subspace::zero(&f, 4); 5]).is_err());
        let mut map = vec![Subspace::coordinate(&f, 4, &[0, 1]); 6];
        map[3] = Subspace::coordinate(&f, 4, &[0]);
        assert!(EmbeddingInstance::new(j, map).is_err());
    }

    #[test]
    fn normalization_uses_complements() {
        let inst = standard_apartment(5, 3);
        let norm = inst.normalized();
        assert_eq!(norm.m(), 2);
        assert_eq!(norm.image(), inst.image());
        assert_eq!(verify_isometric(&norm), Ok(()));
        let v = JohnsonVertex::from_indices(&[3, 4]);
        assert_eq!(norm.get(v).unwrap(), &Subspace::coordinate(&gf2(), 5, &[0, 1, 2]));
    }
}
