//! Structured payloads. Every top-level object carries `"schema": 1`;
//! scalars are exact strings such as `"3"` or `"-1/2"`.

use std::sync::Arc;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::jacobian::{DimReport, Qp};
use crate::linalg::Matrix;
use crate::mutation::{b_matrix, MutationResult};
use crate::quiver::{Arrow, Quiver, Vertex};
use crate::reps::DecoratedRep;
use crate::series::Series;
use crate::text::{format_path, parse_series};

pub const SCHEMA: u64 = 1;

pub fn field_name<F: Field>() -> String {
    match F::characteristic() {
        0 => "q".to_string(),
        p => format!("fp:{p}"),
    }
}

fn with_schema(mut v: Value) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("schema".into(), json!(SCHEMA));
    }
    v
}

pub fn series_terms<F: Field>(x: &Series<F>) -> Value {
    let q = x.quiver();
    Value::Array(
        x.iter()
            .map(|(p, c)| json!({ "coeff": c.to_string(), "path": format_path(q, p) }))
            .collect(),
    )
}

pub fn quiver_value(q: &Quiver) -> Value {
    json!({
        "vertices": q.vertices(),
        "arrows": q.arrows().iter().map(|a| json!({ "name": a.name, "tail": a.tail, "head": a.head })).collect::<Vec<_>>(),
    })
}

pub fn qp_value<F: Field>(qp: &Qp<F>) -> Value {
    let q = qp.quiver();
    let b = b_matrix(q);
    with_schema(json!({
        "field": field_name::<F>(),
        "trunc": qp.trunc(),
        "quiver": quiver_value(q),
        "potential": series_terms(qp.potential().series()),
        "b_matrix": b.entries,
        "two_acyclic": q.is_two_acyclic(),
        "two_cycle_vertices": two_cycle_vertices(q),
    }))
}

/// Vertices lying on an oriented 2-cycle, where mutation is not allowed.
pub fn two_cycle_vertices(q: &Quiver) -> Vec<Vertex> {
    q.vertices()
        .iter()
        .copied()
        .filter(|&v| q.on_two_cycle(v))
        .collect()
}

fn bad(msg: &str) -> Error {
    Error::Parse(format!("json: {msg}"))
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(&format!("missing `{key}`")))
}

fn as_vertex(v: &Value) -> Result<Vertex> {
    v.as_u64()
        .and_then(|x| Vertex::try_from(x).ok())
        .ok_or_else(|| bad("vertex must be a non-negative integer"))
}

/// Inverse of [`qp_value`]; derived fields are ignored.
pub fn qp_from_value<F: Field>(v: &Value) -> Result<Qp<F>> {
    if let Some(s) = v.get("schema") {
        if s.as_u64() != Some(SCHEMA) {
            return Err(bad("unsupported schema"));
        }
    }
    let quiver = get(v, "quiver")?;
    let vertices = get(quiver, "vertices")?
        .as_array()
        .ok_or_else(|| bad("`vertices` must be an array"))?
        .iter()
        .map(as_vertex)
        .collect::<Result<Vec<_>>>()?;
    let arrows = get(quiver, "arrows")?
        .as_array()
        .ok_or_else(|| bad("`arrows` must be an array"))?
        .iter()
        .map(|a| {
            let name = get(a, "name")?
                .as_str()
                .ok_or_else(|| bad("arrow name must be a string"))?;
            Ok(Arrow::new(
                name,
                as_vertex(get(a, "tail")?)?,
                as_vertex(get(a, "head")?)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let q = Arc::new(Quiver::new(vertices, arrows)?);
    let trunc = get(v, "trunc")?
        .as_u64()
        .ok_or_else(|| bad("`trunc` must be an integer"))? as usize;
    let mut src = String::new();
    for t in get(v, "potential")?
        .as_array()
        .ok_or_else(|| bad("`potential` must be an array"))?
    {
        let c = get(t, "coeff")?
            .as_str()
            .ok_or_else(|| bad("coefficients are strings"))?;
        let p = get(t, "path")?
            .as_str()
            .ok_or_else(|| bad("paths are strings"))?;
        src.push_str(&format!(" + {c} * {p}"));
    }
    let s = parse_series::<F>(&q, trunc, src.trim_start_matches(" + "))?;
    Qp::new(&s)
}

pub fn dims_value(kind: &str, r: &DimReport) -> Value {
    with_schema(json!({
        "kind": kind,
        "first_degree": r.first_degree,
        "dims": r.dims,
        "trunc": r.trunc(),
        "stabilized": r.stabilized,
        "total": r.total(),
        "truncated_total": r.truncated_total(),
        "characteristic": r.characteristic,
    }))
}

pub fn mutation_value<F: Field>(m: &MutationResult<F>) -> Value {
    with_schema(json!({
        "vertex": m.vertex,
        "premutated": qp_value(&m.premutation.qp),
        "trivial_pairs": m.reduction.trivial_pair_names(),
        "degenerate": m.degenerate,
        "qp": qp_value(&m.mutated),
    }))
}

pub fn matrix_value<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(
                    m.row(i)
                        .iter()
                        .map(|x| Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn rep_value<F: Field>(r: &DecoratedRep<F>) -> Value {
    let q = r.quiver();
    let mut arrows = Map::new();
    for a in q.arrow_ids() {
        arrows.insert(q.name(a).to_string(), matrix_value(r.action(a)));
    }
    with_schema(json!({
        "vertices": q.vertices(),
        "m": r.m_dims(),
        "v": r.v_dims(),
        "arrows": arrows,
        "valid": r.is_valid(),
    }))
}

/// Inverse of [`rep_value`] over `qp`.
pub fn rep_from_value<F: Field>(qp: &Qp<F>, v: &Value) -> Result<DecoratedRep<F>> {
    let dims = |key: &str| -> Result<Vec<usize>> {
        get(v, key)?
            .as_array()
            .ok_or_else(|| bad("dimensions must be an array"))?
            .iter()
            .map(|x| {
                x.as_u64()
                    .map(|d| d as usize)
                    .ok_or_else(|| bad("bad dimension"))
            })
            .collect()
    };
    let m = dims("m")?;
    let vd = dims("v")?;
    let arrows = get(v, "arrows")?
        .as_object()
        .ok_or_else(|| bad("`arrows` must be an object"))?;
    let mut named = Vec::new();
    for (name, rows) in arrows {
        let rows = rows
            .as_array()
            .ok_or_else(|| bad("matrix must be an array of rows"))?
            .iter()
            .map(|row| {
                row.as_array()
                    .ok_or_else(|| bad("row must be an array"))?
                    .iter()
                    .map(|x| F::parse(x.as_str().ok_or_else(|| bad("entries are strings"))?))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        named.push((name.clone(), rows));
    }
    let q = qp.quiver();
    let mut mats = Vec::new();
    for (name, rows) in named {
        let a = q.arrow_id(&name)?;
        let shape = (m[q.vertex_index(q.head(a))?], m[q.vertex_index(q.tail(a))?]);
        let mat = if shape.0 == 0 || shape.1 == 0 {
            Matrix::zeros(shape.0, shape.1)
        } else {
            Matrix::from_rows(rows)?
        };
        mats.push((name, mat));
    }
    let refs: Vec<(&str, Matrix<F>)> = mats.iter().map(|(n, x)| (n.as_str(), x.clone())).collect();
    DecoratedRep::from_named(qp, &m, &vd, &refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::field::{Fp, Rational};

    #[test]
    fn qp_round_trip() {
        let qp =
            catalog::cyclic_triangle::<Rational>(&[Rational::new(1, 2), Rational::new(-3, 1)], 7)
                .unwrap();
        let v = qp_value(&qp);
        assert_eq!(v["schema"], 1);
        assert_eq!(v["potential"][0]["coeff"], "1/2");
        let text = serde_json::to_string(&v).unwrap();
        let back: Qp<Rational> = qp_from_value(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, qp);
    }

    #[test]
    fn prime_field_name() {
        let qp = catalog::four_cycle::<Fp<7>>(4).unwrap();
        assert_eq!(qp_value(&qp)["field"], "fp:7");
    }

    #[test]
    fn rep_round_trip() {
        let dt = catalog::double_triangle::<Rational>(6).unwrap();
        let r = catalog::band_rep(&dt, 2, 1).unwrap();
        let v = rep_value(&r);
        assert_eq!(v["m"], json!([2, 3, 1]));
        assert_eq!(rep_from_value(&dt, &v).unwrap(), r);
    }

    #[test]
    fn rejects_other_schema() {
        let qp = catalog::four_cycle::<Rational>(4).unwrap();
        let mut v = qp_value(&qp);
        v["schema"] = json!(2);
        assert!(qp_from_value::<Rational>(&v).is_err());
    }
}
