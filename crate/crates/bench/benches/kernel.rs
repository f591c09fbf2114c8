use criterion::{black_box, criterion_group, criterion_main, Criterion};
use fanodb_bench::{cube, hexagon_prism};
use fanodb_core::{enumerate_smooth_fano, normal_form, Polytope};

fn hull(c: &mut Criterion) {
    let pts: Vec<Vec<i64>> = hexagon_prism()
        .integer_vertices()
        .unwrap()
        .iter()
        .map(|v| v.iter().map(|x| x.try_into().unwrap()).collect())
        .collect();
    c.bench_function("hull/hexagon_prism", |b| b.iter(|| Polytope::from_i64_vertices(black_box(&pts)).unwrap()));
}

fn invariants(c: &mut Criterion) {
    let p = hexagon_prism();
    c.bench_function("lattice_points/hexagon_prism", |b| b.iter(|| black_box(&p).n_lattice_points()));
    c.bench_function("ehrhart/hexagon_prism", |b| b.iter(|| black_box(&p).ehrhart().unwrap()));
    c.bench_function("polar/cube", |b| {
        let q = cube();
        b.iter(|| black_box(&q).polar_dual().unwrap())
    });
}

fn normal_forms(c: &mut Criterion) {
    let cube = cube();
    let prism = hexagon_prism();
    c.bench_function("normal_form/cube", |b| b.iter(|| normal_form(black_box(&cube)).unwrap()));
    c.bench_function("normal_form/hexagon_prism", |b| b.iter(|| normal_form(black_box(&prism)).unwrap()));
}

fn enumerate(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumerate");
    g.sample_size(10);
    g.bench_function("dim2", |b| b.iter(|| enumerate_smooth_fano(2, 2).unwrap()));
    g.bench_function("dim3", |b| b.iter(|| enumerate_smooth_fano(3, 2).unwrap()));
    g.finish();
}

criterion_group!(benches, hull, invariants, normal_forms, enumerate);
criterion_main!(benches);
