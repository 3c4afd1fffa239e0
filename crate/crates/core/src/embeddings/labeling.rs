use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::grassmannian::distance;
use crate::johnson::{johnson_distance, JohnsonGraph};
use crate::subspace::Subspace;

use super::EmbeddingInstance;

const LABEL_BUDGET: u64 = 10_000_000;

fn distance_matrix(image: &[Subspace]) -> Result<Vec<usize>> {
    let len = image.len();
    let mut d = vec![0; len * len];
    for i in 0..len {
        for j in i + 1..len {
            let x = distance(&image[i], &image[j])?;
            d[i * len + j] = x;
            d[j * len + i] = x;
        }
    }
    Ok(d)
}

/// `(l, m′)` of the Johnson graph whose isometric image this could be:
/// the diameter is `m′` and the common degree is `m′(l − m′)`.
pub fn infer_johnson_parameters(image: &[Subspace]) -> Result<(usize, usize)> {
    if image.len() < 2 {
        return Err(Error::pre("an image needs at least two subspaces"));
    }
    let d = distance_matrix(image)?;
    let len = image.len();
    if (0..len).any(|i| (0..len).any(|j| i != j && d[i * len + j] == 0)) {
        return Err(Error::pre("image contains repeated subspaces"));
    }
    let diameter = *d.iter().max().expect("nonempty");
    let degree = (0..len).filter(|&j| d[j] == 1).count();
    if (0..len).any(|i| (0..len).filter(|&j| d[i * len + j] == 1).count() != degree) {
        return Err(Error::Structure("induced graph is not regular".into()));
    }
    if degree % diameter != 0 {
        return Err(Error::Structure(format!(
            "degree {degree} and diameter {diameter} fit no Johnson graph"
        )));
    }
    let l = degree / diameter + diameter;
    if binomial(l as u64, diameter as u64) != len as u128 {
        return Err(Error::Structure(format!(
            "{len} subspaces cannot form J({l}, {diameter})"
        )));
    }
    Ok((l, diameter))
}

/// Finds a vertex labeling that makes the image an isometric embedding of
/// `J(l, m′)`, by distance-pruned backtracking.
pub fn label_image(image: &[Subspace]) -> Result<EmbeddingInstance> {
    let (l, m) = infer_johnson_parameters(image)?;
    let johnson = JohnsonGraph::new(l, m)?;
    let d = distance_matrix(image)?;
    let len = image.len();
    let verts = johnson.vertices();
    let mut assigned: Vec<usize> = Vec::with_capacity(len);
    let mut used = vec![false; len];
    let mut nodes = 0u64;

    fn extend(
        pos: usize,
        verts: &[crate::johnson::JohnsonVertex],
        d: &[usize],
        len: usize,
        assigned: &mut Vec<usize>,
        used: &mut [bool],
        nodes: &mut u64,
    ) -> Option<bool> {
        if pos == len {
            return Some(true);
        }
        for cand in 0..len {
            if used[cand] {
                continue;
            }
            *nodes += 1;
            if *nodes > LABEL_BUDGET {
                return None;
            }
            let fits = (0..pos).all(|p| d[assigned[p] * len + cand] == johnson_distance(verts[p], verts[pos]));
            if !fits {
                continue;
            }
            assigned.push(cand);
            used[cand] = true;
            match extend(pos + 1, verts, d, len, assigned, used, nodes) {
                Some(false) => {}
                other => return other,
            }
            used[cand] = false;
            assigned.pop();
        }
        Some(false)
    }

    // the Johnson graph is vertex-transitive, so the first vertex may take image[0]
    assigned.push(0);
    used[0] = true;
    match extend(1, verts, &d, len, &mut assigned, &mut used, &mut nodes) {
        Some(true) => EmbeddingInstance::new(johnson, assigned.iter().map(|&i| image[i].clone()).collect()),
        Some(false) => Err(Error::Structure(format!("image is not isometric to J({l}, {m})"))),
        None => Err(Error::pre(
            "labeling search exceeded its budget; supply a labeled embedding",
        )),
    }
}
