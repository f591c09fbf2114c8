use std::path::Path;
use std::process::{Command, Output};
use std::sync::OnceLock;

use fanodb_core::pipeline::parse_table;
use serde_json::Value;

fn fanodb(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanodb")).arg("--store").arg(store).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// A store built once for the whole file.
fn built() -> &'static Path {
    static DIR: OnceLock<tempfile::TempDir> = OnceLock::new();
    DIR.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let o = fanodb(dir.path(), &["build", "--max-dim", "3"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), "stored 24 documents in LatticePolytopes/SmoothReflexive\n");
        dir
    })
    .path()
}

#[test]
fn info_lists_the_collection() {
    let o = fanodb(built(), &["info"]);
    let text = stdout(&o);
    assert!(
        text.starts_with("DATABASE: LatticePolytopes\nThis database contains various classes of lattice polytopes.\n")
    );
    assert!(text.contains("\nCollection: SmoothReflexive\n"));
    assert!(!text.contains("type_information"));
}

#[test]
fn query_prints_four_documents() {
    let o = fanodb(built(), &["query", "--q", r#"{"DIM":3,"N_FACETS":5}"#]);
    assert!(o.status.success());
    let docs: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(docs.len(), 4);
    let mut points: Vec<u64> = docs.iter().map(|d| d["N_LATTICE_POINTS"].as_u64().unwrap()).collect();
    points.sort_unstable();
    assert_eq!(points, [30, 30, 31, 34]);
    let o = fanodb(built(), &["query", "--q", r#"{"DIM":2}"#, "--count"]);
    assert_eq!(stdout(&o), "5\n");
    let o = fanodb(built(), &["query", "--q", r#"{"DIM":{"$gt":99}}"#]);
    assert_eq!(stdout(&o), "");
}

#[test]
fn decompose_table_dimension_two() {
    let o = fanodb(built(), &["decompose", "--dim", "2", "--format", "table"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = parse_table(&stdout(&o)).unwrap();
    let counts: Vec<(String, usize)> = rows.into_iter().map(|r| (r.row, r.count)).collect();
    let expected = [
        ("smooth Fano polytopes", 5),
        ("free sums", 1),
        ("skew bipyramids", 1),
        ("sg simplex-1 sums", 2),
        ("sg simplex-2 sums", 1),
        ("total sg simplex sums", 3),
        ("total decomposable", 3),
    ];
    assert_eq!(counts, expected.map(|(r, c)| (r.to_string(), c)));

    let o = fanodb(built(), &["decompose", "--dim", "2,3", "--format", "ndjson", "--splitinfo"]);
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let table = fanodb(built(), &["decompose", "--dim", "2,3"]);
    let rows = parse_table(&stdout(&table)).unwrap();
    let ndjson_rows: Vec<&Value> = lines.iter().filter(|l| l.get("row").is_some()).collect();
    assert_eq!(ndjson_rows.len(), rows.len());
    for (a, b) in ndjson_rows.iter().zip(&rows) {
        assert_eq!(a["row"], b.row.as_str());
        assert_eq!(a["count"], b.count);
        assert_eq!(a["dimension"], b.dimension);
    }
    assert!(lines.iter().any(|l| l.get("splits").is_some()));
}

#[test]
fn enumerate_dimension_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = fanodb(dir.path(), &["enumerate", "--dim", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("dimension 1: 1 class "));
}

#[test]
fn exit_codes() {
    let store = built();
    assert_eq!(fanodb(store, &["query", "--frobnicate"]).status.code(), Some(2));
    let o = fanodb(store, &["query", "--q", r#"{"DIM":{"$frobnicate":1}}"#]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&o.stderr).lines().count(), 1);
    assert_eq!(fanodb(store, &["query", "--q", "{oops"]).status.code(), Some(3));
    assert_eq!(fanodb(store, &["query", "--collection", "Nope"]).status.code(), Some(4));
    let missing = store.join("missing.ndjson");
    assert_eq!(fanodb(store, &["import", "--file", missing.to_str().unwrap()]).status.code(), Some(6));
    let empty = tempfile::tempdir().unwrap();
    assert_eq!(fanodb(empty.path(), &["decompose", "--dim", "2"]).status.code(), Some(4));
}

#[test]
fn export_import_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("sr.ndjson");
    let o = fanodb(built(), &["export", "--file", file.to_str().unwrap()]);
    assert_eq!(stdout(&o), "exported 24 documents from LatticePolytopes/SmoothReflexive\n");
    let fresh = dir.path().join("store");
    let o = fanodb(&fresh, &["import", "--file", file.to_str().unwrap()]);
    assert_eq!(stdout(&o), "imported 24 documents into LatticePolytopes/SmoothReflexive\n");
    let a = stdout(&fanodb(built(), &["query"]));
    let b = stdout(&fanodb(&fresh, &["query"]));
    assert_eq!(a, b);
    let o = fanodb(&fresh, &["import", "--file", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("duplicate _id F.1D.0000"));
}
