//! Graphviz export with stable vertex and edge order.

use std::fmt::Write;

use crate::error::Result;
use crate::grassmannian::Grassmannian;
use crate::johnson::JohnsonGraph;
use crate::oracle::DistanceRows;
use crate::subspace::Subspace;

fn rows_label(s: &Subspace) -> String {
    s.to_rows()
        .iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// The subgraph of `Γ_k(V)` induced on `ids` (all of `G_k(V)` when `None`).
pub fn grassmann_dot(g: &Grassmannian, ids: Option<&[u32]>) -> String {
    let mut ids: Vec<u32> = match ids {
        Some(ids) => ids.to_vec(),
        None => (0..g.len() as u32).collect(),
    };
    ids.sort_unstable();
    ids.dedup();
    let rows = DistanceRows::new(g);
    let mut out = String::new();
    let _ = writeln!(out, "graph \"G_{}(GF({})^{})\" {{", g.k(), g.field().q(), g.n());
    for &id in &ids {
        let _ = writeln!(out, "  {id} [label=\"{id}\", tooltip=\"{}\"];", rows_label(g.get(id)));
    }
    for (i, &a) in ids.iter().enumerate() {
        let row = rows.row(a);
        for &b in &ids[i + 1..] {
            if row[b as usize] == 1 {
                let _ = writeln!(out, "  {a} -- {b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

/// The subgraph of `Γ_k(V)` induced on arbitrary subspaces of one Grassmannian.
pub fn subspaces_dot(subspaces: &[Subspace]) -> Result<String> {
    let first = subspaces
        .first()
        .ok_or_else(|| crate::error::Error::pre("nothing to export"))?;
    let g = Grassmannian::new(first.field(), first.ambient_dim(), first.dim())?;
    let ids = subspaces
        .iter()
        .map(|s| {
            g.id_of(s)
                .ok_or_else(|| crate::error::Error::pre("subspaces of different Grassmannians"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(grassmann_dot(&g, Some(&ids)))
}

pub fn johnson_dot(j: &JohnsonGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph \"J({},{})\" {{", j.l(), j.m());
    for (i, v) in j.vertices().iter().enumerate() {
        let label: Vec<String> = v.indices().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "  {i} [label=\"{{{}}}\"];", label.join(","));
    }
    for (i, ns) in j.neighbors().iter().enumerate() {
        for &w in ns.iter().filter(|&&w| w as usize > i) {
            let _ = writeln!(out, "  {i} -- {w};");
        }
    }
    out.push_str("}\n");
    out
}
