use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use tkcert::densest::{densest_subgraph, DensestMethod};
use tkcert::engine::{find_subdivision, generic_tk, Mode};
use tkcert::params::ParamSet;
use tkcert::validate;
use tkcert_bench::{gq, polarity, sparse_random};

fn drc(c: &mut Criterion) {
    let ps = ParamSet::desk();
    let mut group = c.benchmark_group("drc");
    for q in [11, 17, 23] {
        let g = polarity(q);
        group.bench_with_input(BenchmarkId::from_parameter(q), &g, |b, g| {
            b.iter(|| find_subdivision(black_box(g), Mode::Drc, &ps, 0))
        });
    }
    group.finish();
}

fn pipelines(c: &mut Criterion) {
    let ps = ParamSet::desk();
    let dense = gq(5);
    c.bench_function("dense_gq5", |b| {
        b.iter(|| find_subdivision(black_box(&dense), Mode::Dense, &ps, 0))
    });
    let sparse = sparse_random(1000, 6.0);
    c.bench_function("sparse_random_2000", |b| {
        b.iter(|| find_subdivision(black_box(&sparse), Mode::Sparse, &ps, 0))
    });
}

fn pieces(c: &mut Criterion) {
    let g = polarity(23);
    c.bench_function("densest_exact_polarity23", |b| {
        b.iter(|| densest_subgraph(&g, DensestMethod::Exact))
    });
    c.bench_function("densest_peeling_polarity23", |b| {
        b.iter(|| densest_subgraph(&g, DensestMethod::Peeling))
    });
    let cert = generic_tk(&g, None).unwrap();
    c.bench_function("generic_tk_polarity23", |b| b.iter(|| generic_tk(black_box(&g), None)));
    c.bench_function("validate_polarity23", |b| {
        b.iter(|| validate(&g, black_box(&cert), None))
    });
}

criterion_group!(benches, drc, pipelines, pieces);
criterion_main!(benches);
