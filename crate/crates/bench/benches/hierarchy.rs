use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kdv_bench::level_one;
use kdv_core::adler_moser::{adjust_taus, potential, theta_sequence};
use kdv_core::fundmat::fundmat_e;
use kdv_core::kdv::kdv_residual;
use kdv_core::ring::parse_ratfun;
use kdv_core::spectral::spectral_curve;
use kdv_core::TauAssignment;

fn thetas(c: &mut Criterion) {
    c.bench_function("theta_sequence symbolic n=4", |b| b.iter(|| theta_sequence(black_box(4), &TauAssignment::symbolic(4)).unwrap()));
    c.bench_function("theta_sequence adjusted n=5", |b| b.iter(|| level_one(black_box(5))));
}

fn residuals(c: &mut Criterion) {
    let u = potential(&level_one(3), 3).unwrap();
    c.bench_function("kdv_residual u_1,3", |b| b.iter(|| kdv_residual(black_box(&u), 1).unwrap()));
}

fn adjustment(c: &mut Criterion) {
    let mut group = c.benchmark_group("adjust_taus");
    group.sample_size(10);
    group.bench_function("r=1 n=3", |b| b.iter(|| adjust_taus(1, black_box(3), 4).unwrap()));
    group.finish();
}

fn matrices(c: &mut Criterion) {
    let seq = level_one(4);
    c.bench_function("fundmat_e r=1 n=3", |b| b.iter(|| fundmat_e(1, black_box(3), &seq).unwrap()));
}

fn curves(c: &mut Criterion) {
    let u = parse_ratfun("12/x^2").unwrap();
    c.bench_function("spectral_curve 12/x^2 n=3", |b| b.iter(|| spectral_curve(black_box(&u), 3).unwrap()));
}

criterion_group!(benches, thetas, residuals, adjustment, matrices, curves);
criterion_main!(benches);
