use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ext_forge::hopf::{Algebra, Profile};
use ext_forge::oracle::{cotor, DualAlgebra, OracleComodule};
use ext_forge::resolve::{algebra_for, ext_cell, h8, minimal_resolution, ChartOptions};
use ext_forge_bench::random_matrix;

fn gf2(c: &mut Criterion) {
    let mut g = c.benchmark_group("rref");
    for n in [128, 512, 1024] {
        let m = random_matrix(7, n, n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| m.rref()));
    }
    g.finish();
}

fn algebra(c: &mut Criterion) {
    c.bench_function("milnor table A(2)", |b| b.iter(|| Algebra::new(Profile::a(2), 23)));
    c.bench_function("milnor table A, degree 40", |b| b.iter(|| Algebra::new(Profile::full(), 40)));
}

fn resolution(c: &mut Criterion) {
    let mut g = c.benchmark_group("resolution");
    g.sample_size(10);
    for (name, p, s, t) in [("A(1) s20 t40", Profile::a(1), 20, 40), ("A(2) s20 t60", Profile::a(2), 20, 60), ("A(2) s33 t160", Profile::a(2), 33, 160)] {
        g.bench_function(name, |b| b.iter(|| minimal_resolution(algebra_for(&p, t), s, t).unwrap()));
    }
    g.finish();
}

fn charts(c: &mut Criterion) {
    let r = minimal_resolution(algebra_for(&Profile::a(2), 100), 30, 100).unwrap();
    let x = h8(&r).unwrap();
    let mut g = c.benchmark_group("charts");
    g.sample_size(10);
    g.bench_function("H(8) over A(2), s30 t100, with products", |b| {
        b.iter(|| ext_cell(&r, &x, None, &ChartOptions::with_products(&r, &["h0", "h1", "h2", "v1^4"])).unwrap())
    });
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let gamma = DualAlgebra::a(2, 30);
    let n = OracleComodule::trivial();
    let mut g = c.benchmark_group("oracle");
    g.sample_size(10);
    g.bench_function("cofree Cotor A(2) s6 t30", |b| b.iter(|| cotor(&gamma, &n, 6, 30).unwrap()));
    g.finish();
}

criterion_group!(benches, gf2, algebra, resolution, charts, oracle);
criterion_main!(benches);
