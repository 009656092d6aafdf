use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_rational::BigRational;

use sfseries::coeffs::oracle_deviations;
use sfseries::identities::{appendix_check, CheckId};
use sfseries::specfun::{bessel_j, struve_h};
use sfseries::TrialFamily;

fn kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernels");
    g.sample_size(10);
    g.bench_function("bessel j3 and struve h3, 1000 args", |b| {
        b.iter(|| {
            (1..=1000)
                .map(|n| bessel_j(3, black_box(n as f64 * 0.7)).unwrap() + struve_h(3, n as f64 * 0.7).unwrap())
                .sum::<f64>()
        })
    });
    g.bench_function("appendix A4 grid", |b| b.iter(|| appendix_check(black_box(CheckId::A4))));
    g.bench_function("coefficient oracle f3 nu=2, n<=20", |b| {
        let fam = TrialFamily::f3(2, BigRational::from_integer(1.into())).unwrap();
        b.iter(|| oracle_deviations(black_box(&fam), 20).unwrap())
    });
    g.finish();
}

criterion_group!(benches, kernels);
criterion_main!(benches);
