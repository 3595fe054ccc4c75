use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rotrange_bench::{a_plus, ramp};
use rotrange_core::cert::DEFAULT_TOL;
use rotrange_core::linalg::DEFAULT_EIG_TOL;
use rotrange_core::{boundary_curve, certify, hermitian_eigenvalues, hermitian_part, validate_geometry};

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eigenvalues");
    for d in [3, 5, 8] {
        let h = hermitian_part(&ramp(d), 0.37);
        group.bench_with_input(BenchmarkId::from_parameter(d), &h, |b, h| {
            b.iter(|| hermitian_eigenvalues(black_box(h), DEFAULT_EIG_TOL).unwrap())
        });
    }
    group.finish();
}

fn certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    for d in [3, 5, 8] {
        let m = ramp(d);
        group.bench_with_input(BenchmarkId::from_parameter(d), &m, |b, m| {
            b.iter(|| certify(black_box(m), DEFAULT_TOL).unwrap())
        });
    }
    group.finish();
}

fn boundary(c: &mut Criterion) {
    let m = a_plus();
    c.bench_function("boundary_curve/a_plus/720", |b| {
        b.iter(|| boundary_curve(black_box(&m), 720).unwrap())
    });
    c.bench_function("validate_geometry/a_plus/60", |b| {
        b.iter(|| validate_geometry(black_box(&m), 60).unwrap())
    });
}

criterion_group!(benches, eigensolver, certification, boundary);
criterion_main!(benches);
