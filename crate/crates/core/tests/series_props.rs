use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use sfseries::coeffs::{coeff_sequence, f1_sign};
use sfseries::identities::{
    default_policy, normalization_sum, verify_with, IdentitySpec, TableTerms, DEFAULT_DIGITS,
};
use sfseries::series_engine::{sum_series, tail_f3, tail_f3_bound, tail_f4, tail_f4_bound};
use sfseries::specfun::hyp2f1_term;
use sfseries::{Family, StopRule, SumMode, SumPolicy, TailModel, TrialFamily};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn family() -> impl Strategy<Value = TrialFamily> {
    let b = prop_oneof![Just(q(1, 2)), Just(q(1, 1)), Just(q(2, 1))];
    let a = (1i64..8, 1i64..4).prop_map(|(n, d)| q(n, d));
    prop_oneof![
        (0u32..=10).prop_map(TrialFamily::f1),
        (0u32..=9, b).prop_map(|(nu, b)| TrialFamily::f2(nu, b).unwrap()),
        (1u32..=8, a.clone()).prop_map(|(nu, a)| TrialFamily::f3(nu, a).unwrap()),
        (1u32..=8, a).prop_map(|(nu, a)| TrialFamily::f4(nu, a).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bessel_inequality(fam in family(), last in 5u64..80) {
        let seq = coeff_sequence(&fam, last).unwrap();
        let sums = seq.partial_sums();
        for w in sums.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        prop_assert!(*sums.last().unwrap() <= 1.0 + 1e-12, "{}: {}", fam, sums.last().unwrap());
    }

    #[test]
    fn f1_sign_pattern(n in 0u64..60, nu in 0u32..=10) {
        let f = hyp2f1_term(n as u32, i64::from(nu) + 2);
        let s = if f.is_zero() { 0 } else if f.is_negative() { -1 } else { 1 };
        let expected = if n % 2 == 0 { s } else { -s };
        prop_assert_eq!(f1_sign(n, nu), expected);
    }
}

#[test]
fn exact_and_float_modes_agree() {
    let bs = [q(1, 2), q(1, 1), q(2, 1)];
    let mut cases: Vec<IdentitySpec> = (0..=10).map(|nu| IdentitySpec::new(Family::F1, nu, None).unwrap()).collect();
    for nu in 0..=9 {
        for b in &bs {
            cases.push(IdentitySpec::new(Family::F2, nu, Some(b.clone())).unwrap());
        }
    }
    for spec in cases {
        let exact = verify_with(&spec, &default_policy(spec.family, spec.nu, SumMode::ExactRational), 1e-9, DEFAULT_DIGITS).unwrap();
        let float = verify_with(&spec, &default_policy(spec.family, spec.nu, SumMode::FloatCompensated), 1e-9, DEFAULT_DIGITS).unwrap();
        let rel = (exact.report.total - float.report.total).abs() / exact.report.total;
        assert!(rel <= 1e-12, "{spec}: {rel:e}");
        assert!(exact.report.exact_partial.is_some() && float.report.exact_partial.is_none());
    }
}

#[test]
fn totals_are_deterministic_across_thread_counts() {
    let spec = IdentitySpec::new(Family::F4, 2, None).unwrap();
    let policy = default_policy(Family::F4, 2, SumMode::FloatCompensated);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| verify_with(&spec, &policy, 1e-6, DEFAULT_DIGITS).unwrap().report)
    };
    let (a, b, c) = (run(1), run(3), run(1));
    assert_eq!(a.total.to_bits(), b.total.to_bits());
    assert_eq!(a.total.to_bits(), c.total.to_bits());
    assert_eq!(a.partial_sum.to_bits(), b.partial_sum.to_bits());
}

/// Summing ten times further must move the tail-corrected total by less than the claimed bounds.
fn brute_force_tail(family: Family, nu: u32, n: u64) {
    let terms = TableTerms::new(family, nu, None).unwrap();
    type TailFn = fn(u32, u64) -> f64;
    let (tail, bound): (TailFn, TailFn) = match family {
        Family::F3 => (tail_f3, tail_f3_bound),
        _ => (tail_f4, tail_f4_bound),
    };
    let model = if family == Family::F3 { TailModel::F3 { nu } } else { TailModel::F4 { nu } };
    let sum = |n: u64| {
        let p = SumPolicy { mode: SumMode::FloatCompensated, stop: StopRule::FixedPlusTail { n, tail: model }, max_terms: n };
        sum_series(&terms, &p).unwrap()
    };
    let short = sum(n);
    let long = sum(10 * n);
    assert_eq!(short.tail_estimate, tail(nu, n));
    let moved = (long.total - short.total).abs();
    let allowed = bound(nu, n) + bound(nu, 10 * n);
    assert!(moved <= allowed, "{family} nu={nu}: moved {moved:e}, bound {allowed:e}");
}

#[test]
fn tail_models_hold_under_brute_force() {
    brute_force_tail(Family::F3, 1, 10_000);
    brute_force_tail(Family::F3, 2, 10_000);
    brute_force_tail(Family::F4, 1, 10_000);
    brute_force_tail(Family::F4, 3, 10_000);
}

#[test]
fn tail_f3_example_value() {
    let pi = std::f64::consts::PI;
    assert!((tail_f3(1, 10_000) - 1e-8 / (2.0 * pi * pi)).abs() < 1e-24);
    assert!((tail_f3(1, 10_000) - 5.066e-10).abs() < 1e-13);
    // the F4 leading coefficient at ν = 1 is 4/π²
    assert!((tail_f4(1, 1000) * 1000.0 / (1.0 - 0.5e-3) - 4.0 / (pi * pi)).abs() < 1e-15);
    for nu in 6..=10 {
        assert!(tail_f3(nu, 1000) < 1e-15);
    }
}

#[test]
fn well_totals_do_not_depend_on_width() {
    for fam in [Family::F3, Family::F4] {
        for nu in 1..=4 {
            let totals: Vec<f64> = [q(1, 2), q(1, 1), q(3, 1)]
                .into_iter()
                .map(|a| {
                    let tf = if fam == Family::F3 { TrialFamily::f3(nu, a) } else { TrialFamily::f4(nu, a) }.unwrap();
                    normalization_sum(&tf, 1e-6).unwrap().total
                })
                .collect();
            let spread = totals.iter().cloned().fold(f64::MIN, f64::max) - totals.iter().cloned().fold(f64::MAX, f64::min);
            assert!(spread <= 1e-10, "{fam} nu={nu}: {totals:?}");
        }
    }
}

#[test]
fn f2_normalization_with_quadrature_norms() {
    for nu in 2..=9 {
        for b in [q(1, 2), q(1, 1), q(2, 1)] {
            let r = normalization_sum(&TrialFamily::f2(nu, b.clone()).unwrap(), 1e-9).unwrap();
            assert!(r.converged, "nu={nu} b={b}: {}", r.total);
        }
    }
}
