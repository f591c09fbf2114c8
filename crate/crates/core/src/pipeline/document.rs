//! Conversion between polytopes and `SmoothReflexive` documents.

use serde_json::{json, Value};

use super::PipelineError;
use crate::exact::{format_rational, parse_rational, Int, Rational};
use crate::polytope::Polytope;

fn int_json(x: &Int) -> Value {
    match i64::try_from(x) {
        Ok(v) => json!(v),
        Err(_) => json!(x.to_string()),
    }
}

fn rational_json(x: &Rational) -> Value {
    if x.is_integer() {
        int_json(&x.to_integer())
    } else {
        json!(format_rational(x))
    }
}

fn rows_json(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| Value::Array(r.iter().map(rational_json).collect())).collect())
}

/// The stored fields of a polytope (database convention) under `_id = id`.
///
/// Rationals are quoted fraction strings; `EHRHART_POLYNOMIAL_COEFF` and
/// `CENTROID` are always strings, as in the published entries.
pub fn polytope_document(id: &str, p: &Polytope) -> Result<Value, PipelineError> {
    let ehrhart = p.ehrhart()?;
    let measure = p.volume_and_centroid();
    let volume = measure.lattice_volume().expect("lattice polytopes have integral normalized volume");
    let strings = |xs: &[Rational]| Value::Array(xs.iter().map(|x| json!(format_rational(x))).collect());
    Ok(json!({
        "_id": id,
        "DIM": p.dim(),
        "VERTICES": rows_json(&p.sorted_vertices()),
        "FACETS": rows_json(&p.sorted_facets()),
        "F_VECTOR": p.f_vector(),
        "EHRHART_POLYNOMIAL_COEFF": strings(&ehrhart.coefficients),
        "H_STAR_VECTOR": ehrhart.h_star.iter().map(int_json).collect::<Vec<_>>(),
        "CENTROID": strings(&measure.centroid),
        "N_LATTICE_POINTS": p.n_lattice_points(),
        "N_VERTICES": p.n_vertices(),
        "N_FACETS": p.n_facets(),
        "LATTICE_VOLUME": int_json(&volume),
        "polyDB": {
            "creator": "fanodb",
            "version": env!("CARGO_PKG_VERSION"),
            "convention": "polar dual of the smooth Fano polytope",
        },
    }))
}

fn entry(v: &Value) -> Option<Rational> {
    match v {
        Value::Number(n) => n.as_i64().map(|i| Rational::from_integer(Int::from(i))),
        Value::String(s) => parse_rational(s),
        _ => None,
    }
}

/// Rebuilds the polytope from a document's homogeneous `VERTICES`.
pub fn polytope_from_document(doc: &Value) -> Result<Polytope, PipelineError> {
    let id = doc.get("_id").and_then(Value::as_str).unwrap_or("?").to_string();
    let bad = |message: &str| PipelineError::BadDocument { id: id.clone(), message: message.to_string() };
    let rows = doc.get("VERTICES").and_then(Value::as_array).ok_or_else(|| bad("no VERTICES array"))?;
    let mut points = Vec::with_capacity(rows.len());
    for row in rows {
        let row: Vec<Rational> = row
            .as_array()
            .ok_or_else(|| bad("VERTICES row is not an array"))?
            .iter()
            .map(entry)
            .collect::<Option<_>>()
            .ok_or_else(|| bad("VERTICES entry is not a number"))?;
        let (head, rest) = row.split_first().ok_or_else(|| bad("empty VERTICES row"))?;
        if *head <= Rational::from_integer(Int::from(0)) {
            return Err(bad("VERTICES rows must start with a positive homogenizing coordinate"));
        }
        points.push(rest.iter().map(|x| x / head).collect::<Vec<_>>());
    }
    Polytope::from_rational_points(&points).map_err(|e| bad(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_pentagon_document() {
        let p = Polytope::from_i64_vertices(&[vec![-1, -1], vec![-1, 1], vec![0, 1], vec![1, 0], vec![1, -1]]).unwrap();
        let doc = polytope_document("F.2D.3", &p).unwrap();
        assert_eq!(doc["F_VECTOR"], json!([5, 5]));
        assert_eq!(doc["EHRHART_POLYNOMIAL_COEFF"], json!(["1", "7/2", "7/2"]));
        assert_eq!(doc["H_STAR_VECTOR"], json!([1, 5, 1]));
        assert_eq!(doc["CENTROID"], json!(["1", "-2/21", "-2/21"]));
        assert_eq!(doc["N_LATTICE_POINTS"], json!(8));
        assert_eq!(doc["LATTICE_VOLUME"], json!(7));
        assert_eq!(doc["VERTICES"], json!([[1, -1, -1], [1, -1, 1], [1, 0, 1], [1, 1, -1], [1, 1, 0]]));
        let mut facets: Vec<Value> = doc["FACETS"].as_array().unwrap().clone();
        let mut expected =
            json!([[1, 0, 1], [1, 0, -1], [1, 1, 0], [1, -1, -1], [1, -1, 0]]).as_array().unwrap().clone();
        facets.sort_by_key(|v| v.to_string());
        expected.sort_by_key(|v| v.to_string());
        assert_eq!(facets, expected);

        let back = polytope_from_document(&doc).unwrap();
        assert_eq!(back.sorted_vertices(), p.sorted_vertices());
    }

    #[test]
    fn bad_documents() {
        assert!(polytope_from_document(&json!({"_id": "x"})).is_err());
        assert!(polytope_from_document(&json!({"_id": "x", "VERTICES": [[0, 1]]})).is_err());
        assert!(polytope_from_document(&json!({"_id": "x", "VERTICES": [[1, true]]})).is_err());
        let half = polytope_from_document(&json!({"VERTICES": [["2", "1"], [1, -1]]})).unwrap();
        assert_eq!(half.vertex_points()[0].len(), 1);
    }
}
