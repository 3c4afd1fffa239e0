//! Exhaustive ground truth on small instances: all isometric images of a
//! Johnson graph in a Grassmann graph, all apartments, and cross-checks
//! against the classifier.

mod apartments;
pub mod graph;
mod validate;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grassmannian::{distance, Grassmannian};
use crate::johnson::JohnsonGraph;
use crate::matrix::Matrix;
use crate::semilinear::SemilinearMap;
use crate::subspace::Subspace;

pub use apartments::{enumerate_apartments, enumerate_frames};
pub use validate::{cross_validate, validate_result, CrossValidation, Rejection};

pub const MAX_ORACLE_VERTICES: usize = 100_000;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub field: Field,
    pub budget: u64,
    pub symmetry_reduction: bool,
    /// Worker threads; 0 uses the global pool.
    pub jobs: usize,
    pub caps: Caps,
}

impl SearchConfig {
    pub fn new(l: usize, m: usize, n: usize, k: usize, field: Field) -> SearchConfig {
        SearchConfig {
            l,
            m,
            n,
            k,
            field,
            budget: 10_000_000,
            symmetry_reduction: false,
            jobs: 0,
            caps: Caps::default(),
        }
    }
}

/// Images found by the search, keyed by sorted dense ids; each carries the
/// lexicographically smallest labeled map found for it.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub grassmannian: std::sync::Arc<Grassmannian>,
    pub johnson: JohnsonGraph,
    pub images: BTreeMap<Vec<u32>, Vec<u32>>,
    pub complete: bool,
    pub nodes: u64,
}

impl OracleResult {
    pub fn image_subspaces(&self, key: &[u32]) -> Vec<Subspace> {
        key.iter().map(|&id| self.grassmannian.get(id).clone()).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleSummary {
    pub l: usize,
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub images: usize,
    pub complete: bool,
    pub nodes: u64,
    pub symmetry_reduction: bool,
}

impl OracleResult {
    pub fn summary(&self, cfg: &SearchConfig) -> OracleSummary {
        OracleSummary {
            l: cfg.l,
            m: cfg.m,
            n: cfg.n,
            k: cfg.k,
            q: cfg.field.q(),
            images: self.images.len(),
            complete: self.complete,
            nodes: self.nodes,
            symmetry_reduction: cfg.symmetry_reduction,
        }
    }
}

/// Lazily computed distance rows of a materialized Grassmannian.
pub struct DistanceRows<'a> {
    g: &'a Grassmannian,
    rows: Vec<OnceLock<Box<[u8]>>>,
    nbrs: Vec<OnceLock<Box<[u32]>>>,
}

impl<'a> DistanceRows<'a> {
    pub fn new(g: &'a Grassmannian) -> DistanceRows<'a> {
        DistanceRows {
            g,
            rows: (0..g.len()).map(|_| OnceLock::new()).collect(),
            nbrs: (0..g.len()).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn row(&self, id: u32) -> &[u8] {
        self.rows[id as usize].get_or_init(|| {
            let s = self.g.get(id);
            self.g
                .elements()
                .iter()
                .map(|t| distance(s, t).expect("same Grassmannian") as u8)
                .collect()
        })
    }

    pub fn neighbors(&self, id: u32) -> &[u32] {
        self.nbrs[id as usize].get_or_init(|| {
            self.row(id)
                .iter()
                .enumerate()
                .filter(|(_, &d)| d == 1)
                .map(|(j, _)| j as u32)
                .collect()
        })
    }
}

struct Search<'a> {
    rows: DistanceRows<'a>,
    jdist: Vec<u8>,
    order: usize,
    /// An earlier adjacent vertex for every vertex after the first.
    anchor: Vec<usize>,
    budget: u64,
    nodes: AtomicU64,
    exceeded: AtomicBool,
}

impl Search<'_> {
    fn candidates(&self, assign: &[u32]) -> Vec<u32> {
        let t = assign.len();
        if t == 0 {
            return (0..self.rows.g.len() as u32).collect();
        }
        self.rows
            .neighbors(assign[self.anchor[t]])
            .iter()
            .copied()
            .filter(|&c| {
                assign
                    .iter()
                    .enumerate()
                    .all(|(p, &a)| self.rows.row(a)[c as usize] == self.jdist[p * self.order + t])
            })
            .collect()
    }

    fn bump(&self) -> bool {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            self.exceeded.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    fn dfs(&self, assign: &mut Vec<u32>, out: &mut BTreeMap<Vec<u32>, Vec<u32>>) {
        if self.exceeded.load(Ordering::Relaxed) {
            return;
        }
        if assign.len() == self.order {
            let mut key = assign.clone();
            key.sort_unstable();
            out.entry(key)
                .and_modify(|best| {
                    if *assign < *best {
                        *best = assign.clone();
                    }
                })
                .or_insert_with(|| assign.clone());
            return;
        }
        for c in self.candidates(assign) {
            if !self.bump() {
                return;
            }
            assign.push(c);
            self.dfs(assign, out);
            assign.pop();
        }
    }
}

fn merge(into: &mut BTreeMap<Vec<u32>, Vec<u32>>, from: BTreeMap<Vec<u32>, Vec<u32>>) {
    for (k, v) in from {
        into.entry(k)
            .and_modify(|best| {
                if v < *best {
                    *best = v.clone();
                }
            })
            .or_insert(v);
    }
}

fn build_search<'a>(g: &'a Grassmannian, johnson: &JohnsonGraph, budget: u64) -> Search<'a> {
    let order = johnson.len();
    let jdist: Vec<u8> = johnson.distance_table();
    let anchor = (0..order)
        .map(|t| {
            if t == 0 {
                0
            } else {
                (0..t).find(|&p| jdist[p * order + t] == 1).expect("lexicographic order is connected")
            }
        })
        .collect();
    Search {
        rows: DistanceRows::new(g),
        jdist,
        order,
        anchor,
        budget,
        nodes: AtomicU64::new(0),
        exceeded: AtomicBool::new(false),
    }
}

fn prepare(cfg: &SearchConfig) -> Result<(Grassmannian, JohnsonGraph)> {
    let g = Grassmannian::with_caps(&cfg.field, cfg.n, cfg.k, &cfg.caps)?;
    if g.len() > MAX_ORACLE_VERTICES {
        return Err(Error::CapExceeded(format!(
            "oracle refuses Grassmannians with more than {MAX_ORACLE_VERTICES} elements ({} requested)",
            g.len()
        )));
    }
    let johnson = JohnsonGraph::new(cfg.l, cfg.m)?;
    Ok((g, johnson))
}

pub(crate) fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    if jobs == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// A linear map sending the canonical basis of `from` to that of `to`, both
/// extended by standard vectors.
fn transporter(from: &Subspace, to: &Subspace) -> Matrix {
    let extend = |s: &Subspace| -> Matrix {
        let field = s.field();
        let n = s.ambient_dim();
        let mut rows: Vec<Vec<u64>> = s.to_rows();
        for t in s.complement_coordinates() {
            let mut e = vec![0u64; n];
            e[t] = 1;
            rows.push(e);
        }
        Matrix::from_rows(field, n, &rows).expect("valid rows")
    };
    let a = extend(from);
    let b = extend(to);
    a.inverse().expect("basis").mul(&b).expect("square")
}

/// Every image of an isometric embedding of `J(l, m)` in `Γ_k(V)`.
///
/// With symmetry reduction the first vertex is pinned to the first element
/// of `G_k(V)` and the images found are spread over `G_k(V)` by one linear
/// map per element.
pub fn enumerate_embeddings(cfg: &SearchConfig) -> Result<OracleResult> {
    let (g, johnson) = prepare(cfg)?;
    let g = std::sync::Arc::new(g);
    let search = build_search(&g, &johnson, cfg.budget);
    let roots: Vec<u32> = if cfg.symmetry_reduction {
        vec![0]
    } else {
        (0..g.len() as u32).collect()
    };
    let tasks: Vec<Vec<u32>> = roots
        .iter()
        .flat_map(|&r| {
            if johnson.len() == 1 {
                return vec![vec![r]];
            }
            search.candidates(&[r]).into_iter().map(move |c| vec![r, c]).collect::<Vec<_>>()
        })
        .collect();
    let seeded = if johnson.len() == 1 { 0 } else { tasks.len() };
    search.nodes.fetch_add((roots.len() + seeded) as u64, Ordering::Relaxed);
    let mut images = with_pool(cfg.jobs, || {
        tasks
            .into_par_iter()
            .map(|mut prefix| {
                let mut out = BTreeMap::new();
                search.dfs(&mut prefix, &mut out);
                out
            })
            .reduce(BTreeMap::new, |mut a, b| {
                merge(&mut a, b);
                a
            })
    })?;
    let complete = !search.exceeded.load(Ordering::Relaxed);
    if cfg.symmetry_reduction {
        images = expand_by_transporters(&g, images)?;
    }
    Ok(OracleResult {
        nodes: search.nodes.load(Ordering::Relaxed),
        grassmannian: g,
        johnson,
        images,
        complete,
    })
}

fn expand_by_transporters(
    g: &Grassmannian,
    found: BTreeMap<Vec<u32>, Vec<u32>>,
) -> Result<BTreeMap<Vec<u32>, Vec<u32>>> {
    let s0 = g.get(0).clone();
    let parts: Vec<BTreeMap<Vec<u32>, Vec<u32>>> = (0..g.len() as u32)
        .into_par_iter()
        .map(|t| {
            let u = SemilinearMap::linear(transporter(&s0, g.get(t))).expect("invertible");
            let mut out = BTreeMap::new();
            for labeled in found.values() {
                let moved: Vec<u32> = labeled
                    .iter()
                    .map(|&id| g.id_of(&u.apply(g.get(id)).expect("same ambient")).expect("in G_k"))
                    .collect();
                let mut key = moved.clone();
                key.sort_unstable();
                merge(&mut out, BTreeMap::from([(key, moved)]));
            }
            out
        })
        .collect();
    let mut all = BTreeMap::new();
    for p in parts {
        merge(&mut all, p);
    }
    Ok(all)
}

/// Knuth's random-probe estimate of the search tree size.
pub fn estimate_nodes(cfg: &SearchConfig, probes: usize, seed: u64) -> Result<f64> {
    let (g, johnson) = prepare(cfg)?;
    let search = build_search(&g, &johnson, u64::MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..probes {
        let mut assign: Vec<u32> = if cfg.symmetry_reduction { vec![0] } else { Vec::new() };
        let mut weight = 1.0;
        let mut estimate = 0.0;
        while assign.len() < johnson.len() {
            let cands = search.candidates(&assign);
            if cands.is_empty() {
                break;
            }
            weight *= cands.len() as f64;
            estimate += weight;
            assign.push(cands[rng.gen_range(0..cands.len())]);
        }
        total += estimate;
    }
    Ok(total / probes.max(1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(l: usize, m: usize, n: usize, k: usize, p: u32) -> SearchConfig {
        SearchConfig::new(l, m, n, k, Field::prime(p).unwrap())
    }

    #[test]
    fn j42_in_g24_gives_840_apartments() {
        let c = cfg(4, 2, 4, 2, 2);
        let r = enumerate_embeddings(&c).unwrap();
        assert!(r.complete);
        assert_eq!(r.images.len(), 840);
        let aps = enumerate_apartments(&c.field, 4, 2).unwrap();
        assert_eq!(r.images.keys().cloned().collect::<Vec<_>>(), aps);
    }

    #[test]
    fn symmetry_reduction_is_complete() {
        let mut c = cfg(4, 2, 4, 2, 2);
        let plain = enumerate_embeddings(&c).unwrap();
        c.symmetry_reduction = true;
        let reduced = enumerate_embeddings(&c).unwrap();
        assert!(reduced.nodes < plain.nodes);
        assert_eq!(
            plain.images.keys().collect::<Vec<_>>(),
            reduced.images.keys().collect::<Vec<_>>()
        );
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let mut c = cfg(4, 2, 4, 2, 2);
        c.budget = 100;
        let r = enumerate_embeddings(&c).unwrap();
        assert!(!r.complete);
    }

    #[test]
    fn cliques_for_m_equal_one() {
        // any 3 of the 7 points
        let c = cfg(3, 1, 3, 1, 2);
        let r = enumerate_embeddings(&c).unwrap();
        assert_eq!(r.images.len(), 35);
    }

    #[test]
    fn estimate_is_positive_and_deterministic() {
        let c = cfg(4, 2, 4, 2, 2);
        let a = estimate_nodes(&c, 50, 7).unwrap();
        assert!(a > 0.0);
        assert_eq!(a, estimate_nodes(&c, 50, 7).unwrap());
    }

    #[test]
    fn transporter_maps_subspaces() {
        let f = Field::prime(3).unwrap();
        let g = Grassmannian::new(&f, 4, 2).unwrap();
        let s0 = g.get(0);
        for t in g.elements().iter().step_by(17) {
            let u = SemilinearMap::linear(transporter(s0, t)).unwrap();
            assert_eq!(&u.apply(s0).unwrap(), t);
        }
    }
}
