//! Expansion coefficients C_n = ∫ ψ φ_n of the four families in closed form,
//! and the same overlaps by high-precision quadrature.
//!
//! The series terms are the table summands; |C_n|² is a family constant times
//! the summand:
//!
//! * F1: T_n = 4^n Γ(n+3/2)² F² / (2n+1)!, F = ₂F₁(−n, ν/2+1; 3/2; 1/2)
//! * F2: T_n = L_ν^{2n+1−ν}(y/2)² y^{2n} / (4^n (2n+1)!), y = b²
//! * F3: T_n = J_{ν+1}(nπ)² / n^{2ν}
//! * F4: T_n = H_ν(nπ)² / n^{2ν}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::exactnum::{double_factorial, factorial, gamma_half, ClosedFormConstant, ExactScalar};
use crate::hp::Hp;
use crate::qmodels::{hermite_coeff_bound, well_all, OscillatorTable, TrialFamily};
use crate::quadrature::{integrate_batch, BatchResult, GaussianEnvelope, QuadOptions};
use crate::real::{Real, Scalar};
use crate::specfun::{
    bessel_j_pi_multiple, hyp2f1_float, hyp2f1_term, laguerre, laguerre_f64, struve_h_pi_multiple,
};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// F1 summand, exactly: rational × π (carried as √π²).
pub fn f1_term_exact(n: u64, nu: u32) -> ExactScalar {
    // Γ(n+3/2)² = π ((2n+1)!!)² / 4^{n+1}, so T_n = π ((2n+1)!!)² F² / (4 (2n+1)!)
    let f = hyp2f1_term(n as u32, i64::from(nu) + 2);
    let df = double_factorial(2 * n as i64 + 1);
    let r = BigRational::new(&df * &df, factorial(2 * n + 1) * BigInt::from(4));
    let f2 = f.rational() * f.rational();
    ExactScalar::with_sqrt_pi(r * f2, 2)
}

/// F1 summand in floating point: (π/4) · (2n+1)!!/(2n)!! · F².
pub fn f1_term_float(n: u64, nu: u32) -> f64 {
    let mut ratio = 1.0f64;
    for k in 1..=n {
        ratio *= (2 * k + 1) as f64 / (2 * k) as f64;
    }
    let f = hyp2f1_float(n as u32, i64::from(nu) + 2);
    std::f64::consts::FRAC_PI_4 * ratio * f * f
}

/// Sign of C_n for F1: (−1)^n sign(F).
pub fn f1_sign(n: u64, nu: u32) -> i8 {
    let f = hyp2f1_term(n as u32, i64::from(nu) + 2);
    let s = if f.is_zero() {
        0
    } else if f.is_negative() {
        -1
    } else {
        1
    };
    if n % 2 == 1 {
        -s
    } else {
        s
    }
}

/// K_ν with |C_n|² = K_ν T_n: A² Γ(ν/2+1)² / (2^ν π^{3/2}).
pub fn f1_scale(nu: u32) -> Result<ClosedFormConstant> {
    let a2 = TrialFamily::f1(nu).exact_norm_sq()?.expect("F1 norm is exact");
    Ok(a2 * f1_raw_scale(nu)?)
}

/// Γ(ν/2+1)² / (2^ν π^{3/2}): squared unnormalized overlap per unit summand.
fn f1_raw_scale(nu: u32) -> Result<ClosedFormConstant> {
    let g = gamma_half(nu + 2)?;
    let g2 = g.clone() * g;
    let c = g2.mul_rational(&BigRational::new(BigInt::one(), BigInt::one() << nu));
    Ok(ClosedFormConstant::new(c, -1, 0) * ClosedFormConstant::from(ExactScalar::with_sqrt_pi(q(1, 1), -1)))
}

/// F2 summand, exactly at rational y = b².
pub fn f2_term_exact(n: u64, nu: u32, y: &BigRational) -> BigRational {
    let l = laguerre(nu, 2 * n as i64 + 1 - i64::from(nu), &(y / q(2, 1)));
    let num = num_traits::pow(y.clone(), 2 * n as usize) * &l * &l;
    num / BigRational::from_integer((BigInt::one() << (2 * n)) * factorial(2 * n + 1))
}

/// F2 summand in floating point.
pub fn f2_term_float(n: u64, nu: u32, y: f64) -> f64 {
    let l = laguerre_f64(nu, 2 * n as i64 + 1 - i64::from(nu), y / 2.0);
    // y^{2n} / (4^n (2n+1)!) as a running product
    let mut w = 1.0f64;
    let c = y * y / 4.0;
    for k in 1..=n {
        w *= c / ((2 * k) as f64 * (2 * k + 1) as f64);
    }
    w * l * l
}

/// Sign of C_n for F2 with ν = 2m or 2m+1: (−1)^{n+m} sign(L).
pub fn f2_sign(n: u64, nu: u32, y: &BigRational) -> i8 {
    let l = laguerre(nu, 2 * n as i64 + 1 - i64::from(nu), &(y / q(2, 1)));
    let s = if l.is_zero() {
        0
    } else if l.is_negative() {
        -1
    } else {
        1
    };
    if (n + u64::from(nu / 2)) % 2 == 1 {
        -s
    } else {
        s
    }
}

/// Squared unnormalized overlap per unit summand for F2:
/// (ν!)² 4^ν (√π/4) e^{−y/2} y^{1−ν}.
pub fn f2_raw_scale<R: Real>(nu: u32, y: &R) -> R {
    let nf = factorial(u64::from(nu));
    let c = BigRational::from_integer(&nf * &nf * (BigInt::one() << (2 * nu)));
    y.from_ratio_like(&c) * y.pi_like().sqrt().div_int(4) * (-y.clone().div_int(2)).exp()
        * y.powi(1 - nu as i32)
}

/// F3 summand J_{ν+1}(nπ)² / n^{2ν}.
pub fn f3_term(n: u64, nu: u32) -> Result<f64> {
    let j = bessel_j_pi_multiple(nu + 1, n)?;
    Ok(j * j * (n as f64).powi(-2 * nu as i32))
}

/// F4 summand H_ν(nπ)² / n^{2ν}.
pub fn f4_term(n: u64, nu: u32) -> Result<f64> {
    let h = struve_h_pi_multiple(nu, n)?;
    Ok(h * h * (n as f64).powi(-2 * nu as i32))
}

fn gamma_nu_half_f64(nu: u32) -> f64 {
    gamma_half(2 * nu + 1).map(|g| g.to_f64()).unwrap_or(f64::NAN)
}

/// Unnormalized overlap ∫ f φ_n for the well families, from the Bessel and
/// Struve sine transforms.
pub fn well_raw_overlap(fam: &TrialFamily, n: u64) -> Result<f64> {
    let pi = std::f64::consts::PI;
    let (nu, a, is_f3) = match fam {
        TrialFamily::F3 { nu, a } => (*nu, a, true),
        TrialFamily::F4 { nu, a } => (*nu, a, false),
        _ => return Err(invalid("well overlap needs F3 or F4")),
    };
    if n == 0 {
        return Err(invalid("well states start at n = 1"));
    }
    let a = a.to_f64().unwrap_or(f64::NAN);
    let base = (2.0 / a).sqrt() * pi.sqrt() / 2.0
        * (2.0 * a * a / (n as f64 * pi)).powi(nu as i32)
        * gamma_nu_half_f64(nu);
    Ok(if is_f3 {
        base * a * bessel_j_pi_multiple(nu + 1, n)?
    } else {
        base * struve_h_pi_multiple(nu, n)?
    })
}

/// K with |C_n|² = K · T_n for the well families:
/// F3 (2/a) B² (π/4) a² (2a²/π)^{2ν} Γ(ν+1/2)², F4 the same without a².
pub fn well_scale(fam: &TrialFamily) -> Result<f64> {
    let (nu, a) = match fam {
        TrialFamily::F3 { nu, a } | TrialFamily::F4 { nu, a } => (*nu, a.to_f64().unwrap_or(f64::NAN)),
        _ => return Err(invalid("well scale needs F3 or F4")),
    };
    let n2 = fam.exact_norm_sq()?.expect("well norms are exact").to_f64();
    let pi = std::f64::consts::PI;
    let g = gamma_nu_half_f64(nu);
    let mut k = 2.0 / a * n2 * pi / 4.0 * (2.0 * a * a / pi).powi(2 * nu as i32) * g * g;
    if matches!(fam, TrialFamily::F3 { .. }) {
        k *= a * a;
    }
    Ok(k)
}

/// |C_n|² exactly, with the sign of C_n.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedSquare {
    pub sign: i8,
    pub square: ClosedFormConstant,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CoeffValue {
    Exact(SignedSquare),
    Float(f64),
}

impl CoeffValue {
    /// C_n as a float.
    pub fn value(&self) -> f64 {
        match self {
            CoeffValue::Exact(s) => f64::from(s.sign) * s.square.to_f64().sqrt(),
            CoeffValue::Float(v) => *v,
        }
    }

    pub fn square(&self) -> f64 {
        match self {
            CoeffValue::Exact(s) => s.square.to_f64(),
            CoeffValue::Float(v) => v * v,
        }
    }
}

/// F1 coefficient: exact |C_n|² and sign.
pub fn coeff_f1(n: u64, nu: u32) -> Result<SignedSquare> {
    let t = ClosedFormConstant::from(f1_term_exact(n, nu));
    Ok(SignedSquare { sign: f1_sign(n, nu), square: f1_scale(nu)? * t })
}

/// F2 coefficient C_n (normalized, signed). `norm_sq` is N² from qmodels.
pub fn coeff_f2(n: u64, nu: u32, b: &BigRational, norm_sq: f64) -> Result<f64> {
    if !b.is_positive() {
        return Err(invalid("b must be positive"));
    }
    let y = b * b;
    let yf = y.to_f64().unwrap_or(f64::NAN);
    let sq = norm_sq * f2_raw_scale(nu, &yf) * f2_term_exact(n, nu, &y).to_f64().unwrap_or(f64::NAN);
    Ok(f64::from(f2_sign(n, nu, &y)) * sq.sqrt())
}

/// F3 coefficient C_n (normalized).
pub fn coeff_f3(n: u64, nu: u32, a: &BigRational) -> Result<f64> {
    let fam = TrialFamily::f3(nu, a.clone())?;
    let b = fam.exact_norm_sq()?.expect("exact").to_f64().sqrt();
    Ok(b * well_raw_overlap(&fam, n)?)
}

/// F4 coefficient C_n (normalized).
pub fn coeff_f4(n: u64, nu: u32, a: &BigRational) -> Result<f64> {
    let fam = TrialFamily::f4(nu, a.clone())?;
    let c = fam.exact_norm_sq()?.expect("exact").to_f64().sqrt();
    Ok(c * well_raw_overlap(&fam, n)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoeffSource {
    ClosedForm,
    Quadrature,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSequence {
    pub family: TrialFamily,
    pub source: CoeffSource,
    pub values: Vec<(u64, CoeffValue)>,
}

impl CoeffSequence {
    /// Σ_{k ≤ i} |C_k|² for each prefix, in index order.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut acc = crate::compensated::NeumaierSum::new();
        self.values
            .iter()
            .map(|(_, v)| {
                acc.add(v.square());
                acc.value()
            })
            .collect()
    }
}

/// Closed-form coefficients from the first eigenstate through index `last`.
pub fn coeff_sequence(fam: &TrialFamily, last: u64) -> Result<CoeffSequence> {
    let first = fam.basis().first_index();
    let norm = match fam {
        TrialFamily::F2 { .. } => fam.norm_sq()?.value(),
        _ => 0.0,
    };
    let values: Result<Vec<(u64, CoeffValue)>> = (first..=last)
        .into_par_iter()
        .map(|n| {
            let v = match fam {
                TrialFamily::F1 { nu } => CoeffValue::Exact(coeff_f1(n, *nu)?),
                TrialFamily::F2 { nu, b } => CoeffValue::Float(coeff_f2(n, *nu, b, norm)?),
                TrialFamily::F3 { nu, a } => CoeffValue::Float(coeff_f3(n, *nu, a)?),
                TrialFamily::F4 { nu, a } => CoeffValue::Float(coeff_f4(n, *nu, a)?),
            };
            Ok((n, v))
        })
        .collect();
    Ok(CoeffSequence { family: fam.clone(), source: CoeffSource::ClosedForm, values: values? })
}

/// Unnormalized overlaps ∫ f φ_n for n = first..=last by quadrature in
/// `bits`-bit arithmetic, all from one node sweep.
pub struct OracleBatch {
    pub first_index: u64,
    pub overlaps: Vec<Hp>,
    pub error_estimates: Vec<f64>,
    pub l1_norms: Vec<f64>,
    pub evaluations: usize,
}

/// |ψ_n(x)| ≤ √2 · 1.0865 · π^{−1/4} (Cramér's bound on Hermite functions).
const HERMITE_FUNCTION_BOUND: f64 = 1.16;

pub fn coeff_oracle_batch(fam: &TrialFamily, last: u64, bits: usize, abs_tol: f64) -> Result<OracleBatch> {
    let first = fam.basis().first_index();
    if last < first {
        return Err(invalid("empty index range"));
    }
    let count = (last - first + 1) as usize;
    let proto = Hp::zero(bits);
    let opts = QuadOptions::absolute(abs_tol).with_max_level(11);
    let r: BatchResult<Hp> = match fam {
        TrialFamily::F1 { .. } | TrialFamily::F2 { .. } => {
            let (rate, coeff) = match fam {
                TrialFamily::F1 { .. } => (2.0, HERMITE_FUNCTION_BOUND),
                _ => (0.5, HERMITE_FUNCTION_BOUND * hermite_coeff_bound(fam.nu())),
            };
            let env = GaussianEnvelope { rate, degree: fam.nu(), coeff_bound: coeff };
            let table = OscillatorTable::new(&proto, last as usize);
            let x = env.truncation_point(abs_tol / 10.0)?;
            let lo = proto.clone();
            let hi = proto.lift(x);
            let mut r = integrate_batch(&lo, &hi, count, &opts, |p| {
                let f = fam.eval_raw(p.x, None);
                table.eval_all(p.x).into_iter().map(|psi| f.clone() * psi).collect()
            })?;
            let tail = env.tail_bound(x);
            r.error_estimates.iter_mut().for_each(|e| *e += tail);
            r
        }
        TrialFamily::F3 { a, .. } | TrialFamily::F4 { a, .. } => {
            let lo = proto.clone();
            let hi = proto.from_ratio_like(a);
            integrate_batch(&lo, &hi, count, &opts, |p| {
                let f = fam.eval_raw(p.x, Some(p.to_hi));
                well_all(&hi, count, p.x).into_iter().map(|phi| f.clone() * phi).collect()
            })?
        }
    };
    Ok(OracleBatch {
        first_index: first,
        overlaps: r.values,
        error_estimates: r.error_estimates,
        l1_norms: r.l1_norms,
        evaluations: r.evaluations,
    })
}

/// Normalized C_n by quadrature, in `f64` (the oracle for a single index).
pub fn coeff_oracle(fam: &TrialFamily, n: u64) -> Result<crate::quadrature::QuadResult> {
    let batch = coeff_oracle_batch(fam, n, 192, 1e-40)?;
    let i = (n - batch.first_index) as usize;
    let norm = fam.norm_sq()?.value().sqrt();
    Ok(crate::quadrature::QuadResult {
        value: norm * batch.overlaps[i].to_f64(),
        error_estimate: norm * batch.error_estimates[i],
        evaluations: batch.evaluations,
        level: 0,
    })
}

/// Closed-form unnormalized overlap at high precision where available
/// (F1, F2); the well families are limited to `f64` by J and H.
pub fn closed_raw_overlap(fam: &TrialFamily, n: u64, bits: usize) -> Result<Hp> {
    match fam {
        TrialFamily::F1 { nu } => {
            let sq = f1_raw_scale(*nu)? * ClosedFormConstant::from(f1_term_exact(n, *nu));
            let v = sq.to_hp(bits).sqrt();
            Ok(if f1_sign(n, *nu) < 0 { -v } else { v })
        }
        TrialFamily::F2 { nu, b } => {
            let y = b * b;
            let yh = Hp::from_rational(&y, bits);
            let t = Hp::from_rational(&f2_term_exact(n, *nu, &y), bits);
            let v = (f2_raw_scale(*nu, &yh) * t).sqrt();
            Ok(if f2_sign(n, *nu, &y) < 0 { -v } else { v })
        }
        _ => Ok(Hp::from_f64(well_raw_overlap(fam, n)?, bits)),
    }
}

/// One closed-form vs. quadrature comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleDeviation {
    pub n: u64,
    pub closed: f64,
    pub oracle: f64,
    /// |closed − oracle| / max(|closed|, floor), where the floor covers
    /// overlaps that vanish exactly.
    pub rel: f64,
}

/// Compares closed-form and quadrature overlaps for every index up to `last`.
pub fn oracle_deviations(fam: &TrialFamily, last: u64) -> Result<Vec<OracleDeviation>> {
    let (bits, tol) = match fam {
        TrialFamily::F1 { .. } | TrialFamily::F2 { .. } => (256, 1e-62),
        _ => (128, 1e-28),
    };
    let batch = coeff_oracle_batch(fam, last, bits, tol)?;
    let mut out = Vec::with_capacity(batch.overlaps.len());
    for (i, oracle) in batch.overlaps.iter().enumerate() {
        let n = batch.first_index + i as u64;
        let closed = closed_raw_overlap(fam, n, bits)?;
        let diff = (closed.clone() - oracle.clone()).abs().to_f64();
        let floor = (batch.l1_norms[i] * 1e-40).max(f64::MIN_POSITIVE);
        let scale = closed.abs().to_f64().max(floor);
        out.push(OracleDeviation { n, closed: closed.to_f64(), oracle: oracle.to_f64(), rel: diff / scale });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn f1_nu1_first_coefficient_matches_closed_form() {
        // C_0 = √(12√3/π) 2^{−1/2} Γ(3/2)² / √π · F, F = 1
        let c = coeff_f1(0, 1).unwrap();
        let g = PI.sqrt() / 2.0;
        let expected = (12.0 * 3f64.sqrt() / PI).sqrt() * 0.5f64.sqrt() * g * g / PI.sqrt();
        assert_eq!(c.sign, 1);
        assert!((c.square.to_f64().sqrt() - expected).abs() < 1e-15);
    }

    #[test]
    fn f1_exact_and_float_terms_agree() {
        for nu in 0..=10 {
            for n in [0u64, 1, 7, 40, 199] {
                let e = f1_term_exact(n, nu).to_f64();
                let f = f1_term_float(n, nu);
                assert!((e - f).abs() <= 1e-13 * e.abs().max(1e-300), "nu={nu} n={n}");
            }
        }
    }

    #[test]
    fn f1_partial_sum_nearly_one() {
        let s = coeff_sequence(&TrialFamily::f1(1), 30).unwrap();
        let last = *s.partial_sums().last().unwrap();
        assert!(last <= 1.0 + 1e-15 && last > 1.0 - 1e-15);
    }

    #[test]
    fn f2_nu0_coefficient_matches_closed_form() {
        let b = q(1, 1);
        let norm = TrialFamily::f2(0, b.clone()).unwrap().norm_sq().unwrap().value();
        let e1 = 1f64.exp();
        for n in 0..5u64 {
            let c = coeff_f2(n, 0, &b, norm).unwrap();
            let pref = (4.0 * e1 / (PI * (e1 - 1.0) * 4f64.powi(n as i32) * factorial(2 * n + 1).to_f64().unwrap())).sqrt();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let expected = pref * sign / 2.0 * PI.sqrt() * (-0.25f64).exp();
            assert!((c - expected).abs() < 1e-14, "n={n}");
        }
    }

    #[test]
    fn f2_exact_and_float_terms_agree() {
        for nu in 0..=9 {
            for n in [0u64, 1, 5, 30] {
                for y in [q(1, 4), q(1, 1), q(4, 1)] {
                    let e = f2_term_exact(n, nu, &y).to_f64().unwrap();
                    let f = f2_term_float(n, nu, y.to_f64().unwrap());
                    assert!((e - f).abs() <= 1e-12 * e.abs().max(1e-300), "nu={nu} n={n} y={y}");
                }
            }
        }
    }

    #[test]
    fn well_coefficients_match_known_instances() {
        let a = q(1, 1);
        for n in 1..6u64 {
            let j2 = bessel_j_pi_multiple(2, n).unwrap();
            let c = coeff_f3(n, 1, &a).unwrap();
            assert!((c - 15f64.sqrt() / 2.0 * j2 / n as f64).abs() < 1e-15);
            let h1 = struve_h_pi_multiple(1, n).unwrap();
            let c = coeff_f4(n, 1, &a).unwrap();
            assert!((c - 3f64.sqrt() / 2.0 * h1 / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn well_scale_turns_terms_into_squares() {
        for fam in [TrialFamily::f3(3, q(1, 2)).unwrap(), TrialFamily::f4(2, q(3, 1)).unwrap()] {
            let k = well_scale(&fam).unwrap();
            for n in [1u64, 4, 17] {
                let c = match &fam {
                    TrialFamily::F3 { nu, a } => coeff_f3(n, *nu, a).unwrap(),
                    TrialFamily::F4 { nu, a } => coeff_f4(n, *nu, a).unwrap(),
                    _ => unreachable!(),
                };
                let t = match &fam {
                    TrialFamily::F3 { nu, .. } => f3_term(n, *nu).unwrap(),
                    _ => f4_term(n, fam.nu()).unwrap(),
                };
                assert!((c * c - k * t).abs() <= 1e-13 * c * c);
            }
        }
    }

    #[test]
    fn oracle_agrees_on_spot_checks() {
        for fam in [
            TrialFamily::f1(2),
            TrialFamily::f2(0, q(1, 1)).unwrap(),
            TrialFamily::f3(2, q(1, 1)).unwrap(),
            TrialFamily::f4(1, q(1, 1)).unwrap(),
        ] {
            for d in oracle_deviations(&fam, 6).unwrap() {
                assert!(d.rel < 1e-10, "{fam} n={}: {} vs {}", d.n, d.closed, d.oracle);
            }
        }
    }

    #[test]
    fn single_oracle_matches_closed_form() {
        let r = coeff_oracle(&TrialFamily::f1(2), 4).unwrap();
        let c = CoeffValue::Exact(coeff_f1(4, 2).unwrap()).value();
        assert!((r.value - c).abs() < 1e-10);
    }
}
