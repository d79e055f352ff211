//! Hot-path benchmarks: transforms, the Poisson solve, and whole steps.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use srsp_bench::fixture;
use srsp_core::{density, poisson_solve, strang_step};

fn transforms(c: &mut Criterion) {
    let mut group = c.benchmark_group("transform");
    for (label, d, n) in [("1d_n64", 1usize, 64usize), ("3d_n16", 3, 16)] {
        let e = fixture(d, n, 1);
        let basis = e.basis().clone();
        let coeffs = e.psi()[0].clone();
        let grid = basis.synthesize(&coeffs).unwrap();
        group.bench_with_input(BenchmarkId::new("synthesize", label), &coeffs, |b, c| {
            b.iter(|| basis.synthesize(black_box(c)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("analyze", label), &grid, |b, f| {
            b.iter(|| basis.analyze(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn poisson(c: &mut Criterion) {
    let mut group = c.benchmark_group("poisson");
    for (label, d, n) in [("1d_n64", 1usize, 64usize), ("3d_n16", 3, 16)] {
        let e = fixture(d, n, 2);
        let rho = density(&e);
        let basis = e.basis().clone();
        group.bench_with_input(BenchmarkId::from_parameter(label), &rho, |b, n| {
            b.iter(|| poisson_solve(&basis, black_box(n)))
        });
    }
    group.finish();
}

fn stepping(c: &mut Criterion) {
    let mut group = c.benchmark_group("strang_step");
    group.sample_size(20);
    for (label, d, n, k) in [("1d_n64_k4", 1usize, 64usize, 4usize), ("3d_n16_k2", 3, 16, 2)] {
        let e = fixture(d, n, k);
        group.bench_with_input(BenchmarkId::from_parameter(label), &e, |b, e| {
            b.iter(|| strang_step(black_box(e), 1e-3))
        });
    }
    group.finish();
}

criterion_group!(benches, transforms, poisson, stepping);
criterion_main!(benches);
