use std::hint::black_box;

use bdl_core::bdl::fk_parikh;
use bdl_core::bdl::scan_normal;
use bdl_core::fixtures;
use bdl_core::{char_poly, eigen_classify, generate_window, Normal};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn spectral(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectral");
    for (name, s) in fixtures::all_substitutions() {
        group.bench_with_input(BenchmarkId::new("char_poly", name), &s, |b, s| {
            b.iter(|| char_poly(black_box(s.incidence())).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("eigen_classify", name), &s, |b, s| {
            b.iter(|| eigen_classify(black_box(s.incidence()), 1e-9).unwrap())
        });
    }
    group.finish();
}

fn windows(c: &mut Criterion) {
    let s = fixtures::counterexample_substitution();
    let seed = s.seed(1, 'B', 'B').unwrap();
    let mut group = c.benchmark_group("generate_window");
    group.sample_size(20);
    for n in [100_000usize, 1_000_000] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| generate_window(&s, &seed, n, n).unwrap())
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let s = fixtures::counterexample_substitution();
    let seed = s.seed(1, 'B', 'B').unwrap();
    let exact = Normal::from_i64s(&[3, -1, 0]);
    let real = Normal::Real(vec![3.0 / 10f64.sqrt(), -1.0 / 10f64.sqrt(), 0.0]);
    let mut group = c.benchmark_group("scan");
    group.sample_size(20);
    for n in [100_000usize, 1_000_000] {
        let window = generate_window(&s, &seed, n, n).unwrap();
        group.bench_with_input(BenchmarkId::new("exact", n), window.word(), |b, w| {
            b.iter(|| scan_normal(w, &exact).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("float", n), window.word(), |b, w| {
            b.iter(|| scan_normal(w, &real).unwrap())
        });
    }
    group.finish();
}

fn fk(c: &mut Criterion) {
    let mut group = c.benchmark_group("fk_parikh");
    for k in [4usize, 10, 40] {
        group.bench_with_input(BenchmarkId::from_parameter(k), &k, |b, &k| {
            b.iter(|| fk_parikh(black_box(k)))
        });
    }
    group.finish();
}

criterion_group!(benches, spectral, windows, scans, fk);
criterion_main!(benches);
