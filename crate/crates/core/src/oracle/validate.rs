use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::embeddings::{classify, EmbeddingInstance};
use crate::error::Result;
use crate::grassmannian::bfs;

use super::{enumerate_apartments, enumerate_embeddings, with_pool, DistanceRows, OracleResult, SearchConfig};

#[derive(Debug, Clone, Serialize)]
pub struct Rejection {
    pub image: Vec<u32>,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossValidation {
    pub images: usize,
    pub complete: bool,
    pub nodes: u64,
    /// BFS distances from the first element agree with `dim(S + U) − k`.
    pub bfs_matches_formula: Option<bool>,
    /// `None` when `m′ ≤ 1`, where no classification applies.
    pub classified: Option<usize>,
    pub rejections: Vec<Rejection>,
    pub tags: BTreeMap<String, usize>,
    pub full_apartments: usize,
    /// Set when `(l, m) = (n, k)` with `n = 2k`.
    pub equals_apartments: Option<bool>,
}

impl CrossValidation {
    pub fn passed(&self) -> bool {
        self.complete
            && self.rejections.is_empty()
            && self.bfs_matches_formula != Some(false)
            && self.equals_apartments != Some(false)
    }
}

const BFS_CHECK_LIMIT: usize = 4096;

/// Enumerates all images and runs every one through the classifier.
pub fn cross_validate(cfg: &SearchConfig) -> Result<CrossValidation> {
    validate_result(cfg, &enumerate_embeddings(cfg)?)
}

/// Cross-checks an enumeration already carried out with `cfg`.
pub fn validate_result(cfg: &SearchConfig, result: &OracleResult) -> Result<CrossValidation> {
    let g = &result.grassmannian;
    let bfs_matches_formula = (g.len() <= BFS_CHECK_LIMIT).then(|| {
        let rows = DistanceRows::new(g);
        let nbrs: Vec<Vec<u32>> = (0..g.len() as u32).map(|i| rows.neighbors(i).to_vec()).collect();
        bfs(&nbrs, 0)
            .iter()
            .zip(rows.row(0))
            .all(|(b, &d)| *b == Some(d as u32))
    });
    let johnson = &result.johnson;
    let classifiable = johnson.m_prime() > 1;
    let outcomes: Vec<(Vec<u32>, Result<(String, bool)>)> = if classifiable {
        with_pool(cfg.jobs, || {
            result
                .images
                .par_iter()
                .map(|(key, labeled)| {
                    let outcome = EmbeddingInstance::new(johnson.clone(), result.image_subspaces(labeled))
                        .and_then(|inst| classify(&inst))
                        .map(|c| (c.kind.tag().to_string(), c.is_full_apartment));
                    (key.clone(), outcome)
                })
                .collect()
        })?
    } else {
        Vec::new()
    };
    let mut tags = BTreeMap::new();
    let mut rejections = Vec::new();
    let mut full_apartments = 0;
    for (image, outcome) in outcomes {
        match outcome {
            Ok((tag, full)) => {
                *tags.entry(tag).or_insert(0) += 1;
                full_apartments += full as usize;
            }
            Err(e) => rejections.push(Rejection {
                image,
                error: e.to_string(),
            }),
        }
    }
    let equals_apartments = if cfg.l == cfg.n && cfg.m == cfg.k && cfg.n == 2 * cfg.k {
        let aps = enumerate_apartments(&cfg.field, cfg.n, cfg.k)?;
        Some(result.images.keys().eq(aps.iter()))
    } else {
        None
    };
    Ok(CrossValidation {
        images: result.images.len(),
        complete: result.complete,
        nodes: result.nodes,
        bfs_matches_formula,
        classified: classifiable.then(|| tags.values().sum()),
        rejections,
        tags,
        full_apartments,
        equals_apartments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;

    #[test]
    fn j42_in_g24() {
        let cfg = SearchConfig::new(4, 2, 4, 2, Field::prime(2).unwrap());
        let cv = cross_validate(&cfg).unwrap();
        assert!(cv.passed(), "{cv:?}");
        assert_eq!(cv.images, 840);
        assert_eq!(cv.full_apartments, 840);
        assert_eq!(cv.equals_apartments, Some(true));
        assert_eq!(cv.tags.get("ParabolicApartment"), Some(&840));
    }

    #[test]
    fn j52_in_g25_all_classify() {
        let mut cfg = SearchConfig::new(5, 2, 5, 2, Field::prime(2).unwrap());
        cfg.symmetry_reduction = true;
        let cv = cross_validate(&cfg).unwrap();
        assert!(cv.passed(), "{cv:?}");
        assert_eq!(cv.classified, Some(cv.images));
    }
}
