use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_rational::BigRational;

use sfseries::identities::{default_policy, verify_with, DEFAULT_DIGITS};
use sfseries::{Family, IdentitySpec, SumMode};

fn run(family: Family, nu: u32, b: Option<BigRational>, mode: SumMode, tol: f64) -> f64 {
    let spec = IdentitySpec::new(family, nu, b).unwrap();
    verify_with(&spec, &default_policy(family, nu, mode), tol, DEFAULT_DIGITS).unwrap().report.total
}

fn series(c: &mut Criterion) {
    let mut g = c.benchmark_group("series");
    g.sample_size(10);
    g.bench_function("f1 nu=3 exact", |b| b.iter(|| run(Family::F1, black_box(3), None, SumMode::ExactRational, 1e-12)));
    g.bench_function("f1 nu=4 exact fit", |b| {
        b.iter(|| run(Family::F1, black_box(4), None, SumMode::ExactRational, 1e-12))
    });
    g.bench_function("f2 nu=5 b=1/2 float", |b| {
        b.iter(|| {
            let half = BigRational::new(1.into(), 2.into());
            run(Family::F2, black_box(5), Some(half), SumMode::FloatCompensated, 1e-9)
        })
    });
    g.bench_function("f3 nu=2 N=1e4", |b| b.iter(|| run(Family::F3, black_box(2), None, SumMode::FloatCompensated, 1e-6)));
    g.bench_function("f4 nu=1 N=1e5", |b| b.iter(|| run(Family::F4, black_box(1), None, SumMode::FloatCompensated, 1e-6)));
    g.finish();
}

criterion_group!(benches, series);
criterion_main!(benches);
