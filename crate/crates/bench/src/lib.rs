//! Fixtures shared by the benchmarks.

use fanodb_core::docstore::{DocStore, DEFAULT_INDEXES};
use fanodb_core::Polytope;

/// The cube `[-1, 1]^3`.
pub fn cube() -> Polytope {
    let mut pts = Vec::new();
    for a in [-1, 1] {
        for b in [-1, 1] {
            for c in [-1, 1] {
                pts.push(vec![a, b, c]);
            }
        }
    }
    Polytope::from_i64_vertices(&pts).expect("cube")
}

/// Hexagon times a segment, 12 vertices.
pub fn hexagon_prism() -> Polytope {
    let hex = [[1, 0], [0, 1], [-1, 1], [-1, 0], [0, -1], [1, -1]];
    let pts: Vec<Vec<i64>> = hex.iter().flat_map(|&[x, y]| [vec![x, y, 1], vec![x, y, -1]]).collect();
    Polytope::from_i64_vertices(&pts).expect("prism")
}

/// A store holding `n` synthetic documents with the default indexed fields.
pub fn synthetic_store(n: usize) -> DocStore {
    let mut lines = String::new();
    for i in 0..n {
        let doc = serde_json::json!({
            "_id": format!("S.{i:06}"),
            "DIM": 2 + i % 5,
            "N_VERTICES": 3 + i % 17,
            "N_FACETS": 4 + i % 23,
            "N_LATTICE_POINTS": i % 101,
            "LABEL": format!("x{}", i % 7),
        });
        lines.push_str(&doc.to_string());
        lines.push('\n');
    }
    let mut store = DocStore::new();
    store.import_ndjson(lines.as_bytes(), "bench", "docs").expect("import");
    assert_eq!(store.collection("bench", "docs").unwrap().indexed_fields().count(), DEFAULT_INDEXES.len());
    store
}
