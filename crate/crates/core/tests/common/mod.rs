#![allow(dead_code)]

use grassmann_lab::embeddings::{build_dual, build_sum, EmbeddingInstance};
use grassmann_lab::independence::{search_m_independent, Ambient, PointSet, SearchOutcome};
use grassmann_lab::{Field, Matrix, SemilinearMap, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Sum,
    Dual,
}

pub struct GridCase {
    pub label: String,
    pub side: Side,
    pub l: usize,
    pub m: usize,
    pub k: usize,
    pub points: PointSet,
    pub inst: EmbeddingInstance,
}

pub fn random_gl(field: &Field, n: usize, rng: &mut ChaCha8Rng) -> SemilinearMap {
    loop {
        let data: Vec<u8> = (0..n * n).map(|_| rng.gen_range(0..field.q()) as u8).collect();
        let m = Matrix::from_flat(field, n, n, data).unwrap();
        if m.is_invertible() {
            return SemilinearMap::linear(m).unwrap();
        }
    }
}

fn moved(points: &PointSet, g: &SemilinearMap) -> PointSet {
    let ambient = match points.ambient() {
        Ambient::Over(b) => Ambient::Over(g.apply(b).unwrap()),
        Ambient::Under(b) => Ambient::Under(g.apply(b).unwrap()),
    };
    let pts = points.points().iter().map(|p| g.apply(p).unwrap()).collect();
    PointSet::new(ambient, pts).unwrap()
}

/// Every sum and dual construction on the grid q ∈ {2,3}, n ∈ {4,5,6},
/// k ∈ {2,3}, l ∈ {4,5,6}, m = 2 with m ≤ min(k, n − k), in standard and in
/// randomly moved position. Parameters without a valid generating set are
/// reported in the second list.
pub fn construction_grid() -> (Vec<GridCase>, Vec<String>) {
    let m = 2;
    let mut cases = Vec::new();
    let mut skipped = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for p in [2u32, 3] {
        let field = Field::prime(p).unwrap();
        for n in 4..=6 {
            for k in 2..=3 {
                if m > k.min(n - k) {
                    continue;
                }
                for l in 4..=6 {
                    for side in [Side::Sum, Side::Dual] {
                        let ambient = match side {
                            Side::Sum => Ambient::Over(Subspace::coordinate(&field, n, &(0..k - m).collect::<Vec<_>>())),
                            Side::Dual => Ambient::Under(Subspace::coordinate(&field, n, &(0..k + m).collect::<Vec<_>>())),
                        };
                        let label = format!("q={p} n={n} k={k} l={l} {side:?}");
                        let points = match search_m_independent(&ambient, 2 * m, l, 1_000_000).unwrap() {
                            SearchOutcome::Found(ps) => ps,
                            other => {
                                skipped.push(format!("{label}: {other:?}"));
                                continue;
                            }
                        };
                        let g = random_gl(&field, n, &mut rng);
                        for (tag, ps) in [("standard", points.clone()), ("moved", moved(&points, &g))] {
                            let inst = match side {
                                Side::Sum => build_sum(&ps, k).unwrap(),
                                Side::Dual => build_dual(&ps, k).unwrap(),
                            };
                            cases.push(GridCase {
                                label: format!("{label} {tag}"),
                                side,
                                l,
                                m,
                                k,
                                points: ps,
                                inst,
                            });
                        }
                    }
                }
            }
        }
    }
    (cases, skipped)
}

pub fn same_set(a: &[Subspace], b: &[Subspace]) -> bool {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort();
    b.sort();
    a == b
}
