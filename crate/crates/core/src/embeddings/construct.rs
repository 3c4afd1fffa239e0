use crate::error::{Error, Result};
use crate::independence::{canonical_simplex, Ambient, Independence, PointSet};
use crate::johnson::JohnsonGraph;
use crate::subspace::Subspace;

use super::{require_isometric, EmbeddingInstance};

fn require_independence(points: &PointSet, m: usize) -> Result<()> {
    match points.is_m_independent_or_small(2 * m) {
        Independence::Independent => Ok(()),
        Independence::Dependent(witness) => Err(Error::NotIndependent {
            m: (2 * m).min(points.len()),
            witness,
        }),
    }
}

/// `{i_1, …, i_m} ↦ X_{i_1} + … + X_{i_m}` for points `X` over `M`, with
/// `m = k − dim M`. `X` must be `2m`-independent over `M` (independent when
/// it has fewer than `2m` points).
pub fn build_sum(points: &PointSet, k: usize) -> Result<EmbeddingInstance> {
    let Ambient::Over(base) = points.ambient() else {
        return Err(Error::pre("the sum construction needs points over a subspace M"));
    };
    if k <= base.dim() || k > base.ambient_dim() {
        return Err(Error::pre(format!(
            "k = {k} must satisfy dim M = {} < k ≤ n = {}",
            base.dim(),
            base.ambient_dim()
        )));
    }
    let m = k - base.dim();
    let johnson = JohnsonGraph::new(points.len(), m)?;
    require_independence(points, m)?;
    let inst = EmbeddingInstance::from_fn(johnson, |v| {
        v.indices()
            .iter()
            .fold(base.clone(), |acc, &i| acc.sum_unchecked(&points.points()[i]))
    })?;
    require_isometric(&inst)?;
    Ok(inst)
}

/// `{i_1, …, i_m} ↦ Y_{i_1} ∩ … ∩ Y_{i_m}` for hyperplanes `Y` of `N`, with
/// `m = dim N − k`. Computed by annihilator transport of the sum construction
/// over `Y⁰` and checked against the direct intersections.
pub fn build_dual(points: &PointSet, k: usize) -> Result<EmbeddingInstance> {
    let Ambient::Under(roof) = points.ambient() else {
        return Err(Error::pre("the dual construction needs hyperplanes of a subspace N"));
    };
    if k >= roof.dim() {
        return Err(Error::pre(format!("k = {k} must be below dim N = {}", roof.dim())));
    }
    if k == 0 {
        return Err(Error::pre("k must be positive"));
    }
    let n = roof.ambient_dim();
    let transported = build_sum(&points.annihilator(), n - k)?.annihilator();
    let direct = EmbeddingInstance::from_fn(transported.johnson().clone(), |v| {
        v.indices()
            .iter()
            .fold(roof.clone(), |acc, &i| acc.intersect_unchecked(&points.points()[i]))
    })?;
    if direct != transported {
        return Err(Error::Invariant(
            "direct intersections disagree with annihilator transport".into(),
        ));
    }
    require_isometric(&direct)?;
    Ok(direct)
}

/// The apartment of `G_k(V)` defined by `n` independent points.
pub fn build_apartment(frame: &[Subspace], k: usize) -> Result<EmbeddingInstance> {
    let first = frame.first().ok_or_else(|| Error::pre("empty frame"))?;
    let n = first.ambient_dim();
    if frame.len() != n {
        return Err(Error::pre(format!("a frame of an {n}-dimensional space has {n} points")));
    }
    let points = PointSet::new(Ambient::primal(first.field(), n), frame.to_vec())?;
    if !points.is_independent() {
        return Err(Error::NotIndependent {
            m: n,
            witness: (0..n).collect(),
        });
    }
    build_sum(&points, k)
}

/// The `(k−1)`-faces of the canonical `n`-simplex of `Π_V`, an image of `J(n+1, k)`.
pub fn build_simplex_faces(field: &crate::field::Field, n: usize, k: usize) -> Result<EmbeddingInstance> {
    if 2 * k > n {
        return Err(Error::pre(format!("simplex faces need 2k ≤ n, got k = {k}, n = {n}")));
    }
    let simplex = canonical_simplex(&Ambient::primal(field, n), n)?;
    build_sum(&simplex, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::combinations;
    use crate::embeddings::verify_isometric;
    use crate::field::Field;
    use crate::grassmannian::apartment_from_frame;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    fn basis(f: &Field, n: usize) -> Vec<Subspace> {
        (0..n).map(|i| Subspace::coordinate(f, n, &[i])).collect()
    }

    #[test]
    fn sum_over_basis_is_the_standard_apartment() {
        let f = gf(2);
        let inst = build_apartment(&basis(&f, 4), 2).unwrap();
        assert_eq!(inst.map(), apartment_from_frame(&basis(&f, 4), 2).unwrap().as_slice());
        assert_eq!(inst.image().len(), 6);
    }

    #[test]
    fn simplex_faces_meet_in_common_points() {
        let f = gf(2);
        let inst = build_simplex_faces(&f, 4, 2).unwrap();
        assert_eq!((inst.l(), inst.m(), inst.image().len()), (5, 2, 10));
        let verts = inst.johnson().vertices();
        for (i, a) in verts.iter().enumerate() {
            for (j, b) in verts.iter().enumerate() {
                let common = (a.0 & b.0).count_ones() as usize;
                assert_eq!(inst.map()[i].intersection_dim(&inst.map()[j]), common);
            }
        }
        assert!(build_simplex_faces(&f, 4, 3).is_err());
    }

    #[test]
    fn dependent_generators_are_rejected_with_witness() {
        let f = gf(2);
        let amb = Ambient::primal(&f, 4);
        let x = PointSet::from_representatives(amb.clone(), &[[1u8, 0, 0, 0], [0, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 0]]);
        let err = build_sum(&x.unwrap(), 2).unwrap_err();
        assert!(matches!(err, Error::NotIndependent { m: 4, .. }));
    }

    #[test]
    fn dual_over_dual_basis_is_the_standard_apartment() {
        let f = gf(2);
        let amb = Ambient::dual(&f, 4);
        let y = PointSet::from_representatives(amb.clone(), &basis_vectors(4)).unwrap();
        let inst = build_dual(&y, 2).unwrap();
        assert_eq!(inst.image(), build_apartment(&basis(&f, 4), 2).unwrap().image());
    }

    fn basis_vectors(n: usize) -> Vec<Vec<u8>> {
        (0..n)
            .map(|i| {
                let mut v = vec![0; n];
                v[i] = 1;
                v
            })
            .collect()
    }

    #[test]
    fn dual_simplex_matches_transport_of_primal() {
        let f = gf(2);
        let y = canonical_simplex(&Ambient::dual(&f, 4), 4).unwrap();
        let inst = build_dual(&y, 2).unwrap();
        assert_eq!(inst.image().len(), 10);
        assert_eq!(verify_isometric(&inst), Ok(()));
        let primal = build_sum(&y.annihilator(), 2).unwrap().annihilator();
        assert_eq!(primal, inst);
    }

    #[test]
    fn sum_over_parabolic_base() {
        // M = <e0>, X = canonical 4-simplex of V/M, k = 3, m = 2
        let f = gf(3);
        let m = Subspace::coordinate(&f, 5, &[0]);
        let amb = Ambient::Over(m.clone());
        let x = canonical_simplex(&amb, 4).unwrap();
        let inst = build_sum(&x, 3).unwrap();
        assert_eq!((inst.l(), inst.m(), inst.k()), (5, 2, 3));
        for s in inst.map() {
            assert!(m.is_subspace_of(s));
        }
        for idx in combinations(5, 4) {
            let span = Subspace::sum_all(idx.iter().map(|&i| &x.points()[i])).unwrap();
            assert_eq!(span.dim(), 5);
        }
    }
}
