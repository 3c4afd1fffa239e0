//! Versioned JSON documents for subspaces, point sets, embeddings,
//! classifications and rigidity reports.
//!
//! Field elements are written as integers `Σ c_i p^i`. Decoders never panic;
//! malformed input yields [`Error::Schema`] naming the offending field.

use serde_json::{json, Map, Value};

use crate::caps::Caps;
use crate::embeddings::{Case, Classification, ClassificationKind, EmbeddingInstance};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::independence::{Ambient, PointSet};
use crate::johnson::{JohnsonAut, JohnsonGraph, JohnsonVertex};
use crate::matrix::Matrix;
use crate::rigidity::{Extension, RigidityReport};
use crate::semilinear::SemilinearMap;
use crate::subspace::Subspace;

pub const SCHEMA_VERSION: u64 = 1;

struct At<'a> {
    v: &'a Value,
    path: String,
}

impl<'a> At<'a> {
    fn root(v: &'a Value) -> At<'a> {
        At { v, path: "$".into() }
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::schema(self.path.clone(), reason)
    }

    fn get(&self, name: &str) -> Result<At<'a>> {
        let obj = self.v.as_object().ok_or_else(|| self.err("expected an object"))?;
        let v = obj
            .get(name)
            .ok_or_else(|| Error::schema(format!("{}.{name}", self.path), "missing field"))?;
        Ok(At {
            v,
            path: format!("{}.{name}", self.path),
        })
    }

    fn u64(&self) -> Result<u64> {
        self.v.as_u64().ok_or_else(|| self.err("expected a nonnegative integer"))
    }

    fn usize(&self, max: usize) -> Result<usize> {
        let x = self.u64()?;
        if x > max as u64 {
            return Err(self.err(format!("{x} exceeds {max}")));
        }
        Ok(x as usize)
    }

    fn bool(&self) -> Result<bool> {
        self.v.as_bool().ok_or_else(|| self.err("expected a boolean"))
    }

    fn str(&self) -> Result<&'a str> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn array(&self) -> Result<Vec<At<'a>>> {
        let arr = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(arr
            .iter()
            .enumerate()
            .map(|(i, v)| At {
                v,
                path: format!("{}[{i}]", self.path),
            })
            .collect())
    }

    fn vector(&self, field: &Field, n: usize) -> Result<Vec<Elem>> {
        let items = self.array()?;
        if items.len() != n {
            return Err(self.err(format!("expected {n} coordinates, found {}", items.len())));
        }
        items
            .iter()
            .map(|x| {
                let v = x.u64()?;
                if v >= field.q() as u64 {
                    return Err(x.err(format!("{v} is not an element of GF({})", field.q())));
                }
                Ok(v as Elem)
            })
            .collect()
    }

    fn rows(&self, field: &Field, n: usize) -> Result<Subspace> {
        let rows = self.array()?;
        if rows.len() > n {
            return Err(self.err(format!("more than {n} rows")));
        }
        let vecs = rows.iter().map(|r| r.vector(field, n)).collect::<Result<Vec<_>>>()?;
        let s = Subspace::span(field, n, &vecs).map_err(|e| self.err(e.to_string()))?;
        if s.dim() != vecs.len() {
            return Err(self.err("rows are linearly dependent"));
        }
        Ok(s)
    }

    fn matrix(&self, field: &Field, n: usize) -> Result<Matrix> {
        let rows = self.array()?;
        if rows.len() != n {
            return Err(self.err(format!("expected {n} rows, found {}", rows.len())));
        }
        let mut data = Vec::with_capacity(n * n);
        for r in &rows {
            data.extend(r.vector(field, n)?);
        }
        Matrix::from_flat(field, n, n, data).map_err(|e| self.err(e.to_string()))
    }
}

fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))
}

fn check_version(root: &At) -> Result<()> {
    let at = root.get("schema_version")?;
    let v = at.u64()?;
    if v != SCHEMA_VERSION {
        return Err(at.err(format!("unsupported version {v}, expected {SCHEMA_VERSION}")));
    }
    Ok(())
}

fn field_at(p: &At, e: &At, caps: &Caps) -> Result<Field> {
    let pv = p.usize(u32::MAX as usize)? as u32;
    let ev = e.usize(u32::MAX as usize)? as u32;
    Field::with_caps(pv, ev, caps).map_err(|err| match err {
        Error::InvalidField { reason, .. } => p.err(reason),
        other => other,
    })
}

fn dim_at(at: &At, caps: &Caps) -> Result<usize> {
    let n = at.usize(u32::MAX as usize)?;
    if n == 0 {
        return Err(at.err("dimension must be positive"));
    }
    caps.check_dim(n)?;
    Ok(n)
}

fn q_spec(field: &Field) -> Value {
    json!({"p": field.p(), "e": field.e()})
}

fn rows_json(s: &Subspace) -> Value {
    json!(s.to_rows())
}

fn matrix_json(m: &Matrix) -> Value {
    json!(m.to_rows())
}

pub fn subspace_to_json(s: &Subspace) -> Value {
    json!({
        "ambient_dim": s.ambient_dim(),
        "q_spec": q_spec(s.field()),
        "rref_rows": rows_json(s),
    })
}

fn subspace_at(at: &At, caps: &Caps) -> Result<Subspace> {
    let n = dim_at(&at.get("ambient_dim")?, caps)?;
    let qs = at.get("q_spec")?;
    let field = field_at(&qs.get("p")?, &qs.get("e")?, caps)?;
    at.get("rref_rows")?.rows(&field, n)
}

/// A top-level subspace document: the subspace object plus `schema_version`.
pub fn encode_subspace(s: &Subspace) -> Value {
    let mut v = subspace_to_json(s);
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

pub fn decode_subspace(text: &str, caps: &Caps) -> Result<Subspace> {
    let v = parse(text)?;
    let root = At::root(&v);
    check_version(&root)?;
    subspace_at(&root, caps)
}

fn point_set_body(ps: &PointSet) -> Value {
    let (kind, base) = match ps.ambient() {
        Ambient::Over(m) => ("over", m),
        Ambient::Under(n) => ("under", n),
    };
    json!({
        "ambient": {"kind": kind, "base": subspace_to_json(base)},
        "points": ps.representatives(),
    })
}

pub fn encode_point_set(ps: &PointSet) -> Value {
    let mut v = point_set_body(ps);
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

fn point_set_at(at: &At, caps: &Caps) -> Result<PointSet> {
    let amb = at.get("ambient")?;
    let kind_at = amb.get("kind")?;
    let base = subspace_at(&amb.get("base")?, caps)?;
    let ambient = match kind_at.str()? {
        "over" => {
            if base.is_full() {
                return Err(amb.get("base")?.err("the base of an `over` ambient must be proper"));
            }
            Ambient::Over(base)
        }
        "under" => {
            if base.is_zero() {
                return Err(amb.get("base")?.err("the base of an `under` ambient must be nonzero"));
            }
            Ambient::Under(base)
        }
        other => return Err(kind_at.err(format!("unknown ambient kind `{other}`"))),
    };
    let field = ambient.field().clone();
    let n = ambient.n();
    let pts_at = at.get("points")?;
    let items = pts_at.array()?;
    let mut points = Vec::with_capacity(items.len());
    for item in &items {
        let v = item.vector(&field, n)?;
        points.push(ambient.point_from_representative(&v).map_err(|e| item.err(e.to_string()))?);
    }
    PointSet::new(ambient, points).map_err(|e| pts_at.err(e.to_string()))
}

pub fn decode_point_set(text: &str, caps: &Caps) -> Result<PointSet> {
    let v = parse(text)?;
    let root = At::root(&v);
    check_version(&root)?;
    point_set_at(&root, caps)
}

fn johnson_at(l_at: &At, m_at: &At, caps: &Caps) -> Result<JohnsonGraph> {
    let l = l_at.usize(64)?;
    let m = m_at.usize(64)?;
    if !(0 < m && m < l) {
        return Err(m_at.err(format!("need 0 < m < l, got l = {l}, m = {m}")));
    }
    let count = JohnsonGraph::vertex_count(l, m);
    if count > caps.max_vertices as u128 {
        return Err(Error::CapExceeded(format!(
            "J({l}, {m}) has {count} vertices, cap is {}",
            caps.max_vertices
        )));
    }
    JohnsonGraph::new(l, m).map_err(|e| l_at.err(e.to_string()))
}

pub fn encode_embedding(inst: &EmbeddingInstance) -> Value {
    let field = inst.field();
    let map: Vec<Value> = inst
        .johnson()
        .vertices()
        .iter()
        .zip(inst.map())
        .map(|(v, s)| json!({"vertex": v.indices(), "subspace": rows_json(s)}))
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "params": {
            "l": inst.l(), "m": inst.m(), "n": inst.n(), "k": inst.k(),
            "p": field.p(), "e": field.e(),
        },
        "map": map,
    })
}

fn embedding_at(root: &At, caps: &Caps) -> Result<EmbeddingInstance> {
    let params = root.get("params")?;
    let field = field_at(&params.get("p")?, &params.get("e")?, caps)?;
    let n = dim_at(&params.get("n")?, caps)?;
    let k_at = params.get("k")?;
    let k = k_at.usize(n)?;
    let johnson = johnson_at(&params.get("l")?, &params.get("m")?, caps)?;
    let map_at = root.get("map")?;
    let entries = map_at.array()?;
    if entries.len() != johnson.len() {
        return Err(map_at.err(format!("expected {} entries, found {}", johnson.len(), entries.len())));
    }
    let mut slots: Vec<Option<Subspace>> = vec![None; johnson.len()];
    for entry in &entries {
        let vat = entry.get("vertex")?;
        let idx = vat.array()?;
        let mut indices = Vec::with_capacity(idx.len());
        for i in &idx {
            indices.push(i.usize(johnson.l() - 1)?);
        }
        let mut sorted = indices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != johnson.m() || sorted.len() != indices.len() {
            return Err(vat.err(format!("expected {} distinct indices", johnson.m())));
        }
        let pos = johnson
            .index_of(JohnsonVertex::from_indices(&sorted))
            .ok_or_else(|| vat.err("not a vertex"))?;
        if slots[pos].is_some() {
            return Err(vat.err("vertex listed twice"));
        }
        let sat = entry.get("subspace")?;
        let s = sat.rows(&field, n)?;
        if s.dim() != k {
            return Err(sat.err(format!("expected a {k}-dimensional subspace, found {}", s.dim())));
        }
        slots[pos] = Some(s);
    }
    let map = slots.into_iter().map(|s| s.expect("every vertex filled")).collect();
    EmbeddingInstance::new(johnson, map).map_err(|e| map_at.err(e.to_string()))
}

pub fn decode_embedding(text: &str, caps: &Caps) -> Result<EmbeddingInstance> {
    let v = parse(text)?;
    let root = At::root(&v);
    check_version(&root)?;
    embedding_at(&root, caps)
}

fn case_str(c: Case) -> &'static str {
    match c {
        Case::A => "A",
        Case::B => "B",
    }
}

fn kind_body(kind: &ClassificationKind) -> Value {
    match kind {
        ClassificationKind::StarType { base, points } => json!({
            "tag": kind.tag(),
            "base": subspace_to_json(base),
            "generators": point_set_body(points),
        }),
        ClassificationKind::TopType { roof, points } => json!({
            "tag": kind.tag(),
            "roof": subspace_to_json(roof),
            "generators": point_set_body(points),
        }),
        ClassificationKind::ParabolicApartment {
            lower,
            upper,
            generators,
        } => json!({
            "tag": kind.tag(),
            "lower": subspace_to_json(lower),
            "upper": subspace_to_json(upper),
            "generators": point_set_body(generators),
        }),
    }
}

fn classification_body(c: &Classification) -> Value {
    let trace: Vec<Vec<Value>> = c
        .descent_trace
        .iter()
        .map(|level| level.iter().map(rows_json).collect())
        .collect();
    let field = c.generators().ambient().field();
    json!({
        "params": {"l": c.l, "m": c.m, "n": c.n, "k": c.k, "p": field.p(), "e": field.e()},
        "case": case_str(c.case),
        "kind": kind_body(&c.kind),
        "is_full_apartment": c.is_full_apartment,
        "descent_trace": trace,
    })
}

pub fn encode_classification(c: &Classification) -> Value {
    let mut v = classification_body(c);
    v["schema_version"] = json!(SCHEMA_VERSION);
    v
}

fn classification_at(root: &At, caps: &Caps) -> Result<Classification> {
    let params = root.get("params")?;
    let field = field_at(&params.get("p")?, &params.get("e")?, caps)?;
    let n = dim_at(&params.get("n")?, caps)?;
    let k = params.get("k")?.usize(n)?;
    let l = params.get("l")?.usize(64)?;
    let m = params.get("m")?.usize(64)?;
    let case_at = root.get("case")?;
    let case = match case_at.str()? {
        "A" => Case::A,
        "B" => Case::B,
        other => return Err(case_at.err(format!("unknown case `{other}`"))),
    };
    let kind_at = root.get("kind")?;
    let tag_at = kind_at.get("tag")?;
    let gens_at = kind_at.get("generators")?;
    let generators = point_set_at(&gens_at, caps)?;
    if generators.ambient().field() != &field || generators.ambient().n() != n {
        return Err(gens_at.err("generators live in a different space than params"));
    }
    let sub = |name: &str| -> Result<Subspace> {
        let s = subspace_at(&kind_at.get(name)?, caps)?;
        if s.field() != &field || s.ambient_dim() != n {
            return Err(kind_at.get(name)?.err("subspace lives in a different space than params"));
        }
        Ok(s)
    };
    let kind = match tag_at.str()? {
        "StarType" => ClassificationKind::StarType {
            base: sub("base")?,
            points: generators,
        },
        "TopType" => ClassificationKind::TopType {
            roof: sub("roof")?,
            points: generators,
        },
        "ParabolicApartment" => ClassificationKind::ParabolicApartment {
            lower: sub("lower")?,
            upper: sub("upper")?,
            generators,
        },
        other => return Err(tag_at.err(format!("unknown tag `{other}`"))),
    };
    let mut descent_trace = Vec::new();
    for level in root.get("descent_trace")?.array()? {
        let items = level.array()?;
        descent_trace.push(items.iter().map(|s| s.rows(&field, n)).collect::<Result<Vec<_>>>()?);
    }
    Ok(Classification {
        l,
        m,
        n,
        k,
        case,
        kind,
        is_full_apartment: root.get("is_full_apartment")?.bool()?,
        descent_trace,
    })
}

pub fn decode_classification(text: &str, caps: &Caps) -> Result<Classification> {
    let v = parse(text)?;
    let root = At::root(&v);
    check_version(&root)?;
    classification_at(&root, caps)
}

pub fn semilinear_to_json(map: &SemilinearMap) -> Value {
    json!({
        "matrix": matrix_json(map.matrix()),
        "frobenius_power": map.sigma().frobenius_power,
        "codomain_is_dual": map.codomain_is_dual(),
    })
}

pub fn decode_semilinear(value: &Value, field: &Field, n: usize) -> Result<SemilinearMap> {
    let at = At::root(value);
    let matrix = at.get("matrix")?.matrix(field, n)?;
    let fp_at = at.get("frobenius_power")?;
    let fp = fp_at.u64()?;
    if fp >= field.e() as u64 {
        return Err(fp_at.err(format!("must be below e = {}", field.e())));
    }
    let dual = at.get("codomain_is_dual")?.bool()?;
    SemilinearMap::new(matrix, crate::field::FieldAutomorphism::new(fp as u32), dual).map_err(|e| at.err(e.to_string()))
}

fn aut_json(a: &JohnsonAut) -> Value {
    json!({"perm": a.perm, "complement": a.complement})
}

fn extension_json(e: &Extension, n: usize) -> Value {
    match e {
        Extension::Witness(w) => json!({
            "verdict": "Witness",
            "map": semilinear_to_json(&w.map),
            "checked_elements": w.checked_elements,
        }),
        Extension::NotExtendable(c) => json!({
            "verdict": "NotExtendable",
            "rank_defect": c.rank_defect(n),
            "attempts": c.attempts,
        }),
        Extension::Unknown(c) => json!({
            "verdict": "Unknown",
            "rank_defect": c.rank_defect(n),
            "attempts": c.attempts,
        }),
    }
}

/// With `certificates` off, the solver attempts behind negative verdicts are omitted.
pub fn encode_rigidity_report(r: &RigidityReport, certificates: bool) -> Value {
    let n = r.classification.n;
    let per: Vec<Value> = r
        .per_automorphism
        .iter()
        .map(|(a, e)| {
            let mut ext = extension_json(e, n);
            if !certificates {
                if let Some(obj) = ext.as_object_mut() {
                    obj.remove("attempts");
                }
            }
            json!({"automorphism": aut_json(a), "extension": ext})
        })
        .collect();
    let mut out = Map::new();
    out.insert("schema_version".into(), json!(SCHEMA_VERSION));
    out.insert("is_rigid".into(), json!(r.is_rigid));
    out.insert("complete".into(), json!(r.complete));
    out.insert("rigidity_case".into(), json!(r.rigidity_case));
    out.insert("predicted_rigid".into(), json!(r.predicted_rigid));
    out.insert("beyond_rigidity_bound".into(), json!(r.beyond_rigidity_bound));
    out.insert("unique_pgl_extension".into(), json!(r.unique_pgl_extension));
    out.insert("pgl_stabilizer_order".into(), json!(r.pgl_stabilizer_order));
    out.insert("full_space_simplex".into(), json!(r.full_space_simplex));
    out.insert("per_automorphism".into(), Value::Array(per));
    out.insert("classification".into(), classification_body(&r.classification));
    Value::Object(out)
}

/// One oracle image per line: dense ids and the subspaces themselves.
pub fn encode_image_line(ids: &[u32], subspaces: &[Subspace]) -> Value {
    json!({
        "ids": ids,
        "subspaces": subspaces.iter().map(rows_json).collect::<Vec<_>>(),
    })
}
