use std::collections::BTreeSet;

use crate::error::Result;
use crate::field::Field;
use crate::grassmannian::{apartment_from_frame, Grassmannian};
use crate::subspace::Subspace;

fn frames_rec(points: &[Subspace], n: usize, start: usize, span: &Subspace, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if cur.len() == n {
        out.push(cur.clone());
        return;
    }
    let need = n - cur.len();
    for i in start..points.len() {
        if points.len() - i < need {
            break;
        }
        if points[i].is_subspace_of(span) {
            continue;
        }
        cur.push(i as u32);
        frames_rec(points, n, i + 1, &span.sum_unchecked(&points[i]), cur, out);
        cur.pop();
    }
}

/// All unordered bases of `PG(n−1, q)`, as sorted ids of `G_1(V)`.
pub fn enumerate_frames(field: &Field, n: usize) -> Result<Vec<Vec<u32>>> {
    let g1 = Grassmannian::new(field, n, 1)?;
    let mut out = Vec::new();
    frames_rec(g1.elements(), n, 0, &Subspace::zero(field, n), &mut Vec::new(), &mut out);
    Ok(out)
}

/// All apartments of `G_k(V)`, each as sorted ids of `G_k(V)`, in sorted order.
pub fn enumerate_apartments(field: &Field, n: usize, k: usize) -> Result<Vec<Vec<u32>>> {
    let g1 = Grassmannian::new(field, n, 1)?;
    let gk = Grassmannian::new(field, n, k)?;
    let mut out = BTreeSet::new();
    for frame in enumerate_frames(field, n)? {
        let points: Vec<Subspace> = frame.iter().map(|&i| g1.get(i).clone()).collect();
        let mut ids: Vec<u32> = apartment_from_frame(&points, k)?
            .iter()
            .map(|s| gk.id_of(s).expect("element of G_k"))
            .collect();
        ids.sort_unstable();
        out.insert(ids);
    }
    Ok(out.into_iter().collect())
}
