use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use fanodb_bench::synthetic_store;
use fanodb_core::docstore::{FindOptions, Query};
use serde_json::json;

fn queries(c: &mut Criterion) {
    let store = synthetic_store(20_000);
    let coll = store.collection("bench", "docs").unwrap();
    let cases = [
        ("eq_indexed", json!({"DIM": 3, "N_VERTICES": 5})),
        ("in_indexed", json!({"N_FACETS": {"$in": [4, 5, 6]}})),
        ("range", json!({"N_LATTICE_POINTS": {"$gte": 10, "$lt": 20}})),
        ("unindexed", json!({"LABEL": "x3"})),
        ("or", json!({"$or": [{"DIM": 2}, {"LABEL": "x1"}]})),
    ];
    let mut g = c.benchmark_group("query");
    for (name, q) in &cases {
        let q = Query::parse(q).unwrap();
        g.bench_with_input(BenchmarkId::new("find", name), &q, |b, q| {
            b.iter(|| coll.find(black_box(q), FindOptions::default()))
        });
        g.bench_with_input(BenchmarkId::new("scan", name), &q, |b, q| {
            b.iter(|| coll.scan(black_box(q), FindOptions::default()))
        });
    }
    g.finish();
    let q = Query::parse(&json!({"DIM": 4})).unwrap();
    c.bench_function("cursor/drain", |b| {
        b.iter(|| {
            let mut cur = store.db_cursor(&q, "bench", "docs", FindOptions::default()).unwrap();
            let mut n = 0;
            while !cur.at_end() {
                cur.next().unwrap();
                n += 1;
            }
            n
        })
    });
}

fn persistence(c: &mut Criterion) {
    let store = synthetic_store(5_000);
    let mut buf = Vec::new();
    store.export_ndjson(&mut buf, "bench", "docs").unwrap();
    c.bench_function("ndjson/export_5000", |b| {
        b.iter(|| {
            let mut out = Vec::with_capacity(buf.len());
            store.export_ndjson(&mut out, "bench", "docs").unwrap();
            out
        })
    });
    c.bench_function("ndjson/import_5000", |b| {
        b.iter(|| {
            let mut s = fanodb_core::DocStore::new();
            s.import_ndjson(black_box(buf.as_slice()), "bench", "docs").unwrap()
        })
    });
}

criterion_group!(benches, queries, persistence);
criterion_main!(benches);
