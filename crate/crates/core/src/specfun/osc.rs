//! Bessel J_k and Struve H_k of integer order.
//!
//! Below the crossover both use their ascending series in software floating
//! point (the alternating terms grow like e^z before they cancel); above it,
//! Hankel's large-argument expansion in `f64`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{invalid, Error, Result};
use crate::exactnum::{double_factorial, factorial};
use crate::hp::Hp;

/// Regime boundary z* for both functions.
pub const CROSSOVER: f64 = 40.0;
/// Largest order accepted.
pub const MAX_ORDER: u32 = 12;
/// Cap on the number of terms in each asymptotic sum.
pub const ASYMPTOTIC_TERM_CAP: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Series,
    Asymptotic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OscKind {
    BesselJ,
    StruveH,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OscFuncValue {
    pub order: u32,
    pub argument: f64,
    pub kind: OscKind,
    pub value: f64,
    pub regime: Regime,
}

fn check_args(k: u32, z: f64) -> Result<()> {
    if !z.is_finite() {
        return Err(Error::NonFinite(z));
    }
    if z < 0.0 {
        return Err(Error::OutOfDomain { x: z, domain: "z >= 0".into() });
    }
    if k > MAX_ORDER {
        return Err(invalid(format!("order {k} above {MAX_ORDER}")));
    }
    Ok(())
}

fn series_bits(z: f64) -> usize {
    128 + (1.5 * z).ceil() as usize
}

fn hp_int(n: &BigInt, p: usize) -> Hp {
    Hp::from_bigint(n, p)
}

/// Σ_m (−1)^m (z/2)^(k+2m) / (m! (k+m)!) at the precision of `z`.
pub fn bessel_j_series_hp(k: u32, z: &Hp) -> Hp {
    let p = z.precision();
    if z.is_zero() {
        return Hp::from_i64(i64::from(k == 0), p);
    }
    let half = z.div_i64(2);
    let h2 = &half * &half;
    let mut t = half.powi(k as i32) / hp_int(&factorial(u64::from(k)), p);
    let mut sum = t.clone();
    let zf = z.to_f64();
    for m in 0i64.. {
        t = -(&t * &h2).div_i64((m + 1) * (i64::from(k) + m + 1));
        sum = &sum + &t;
        if (m as f64) > zf / 2.0 && negligible(&t, &sum, p) {
            break;
        }
    }
    sum
}

/// Σ_m (−1)^m (z/2)^(2m+k+1) / (Γ(m+3/2) Γ(m+k+3/2)) at the precision of `z`.
pub fn struve_h_series_hp(k: u32, z: &Hp) -> Hp {
    let p = z.precision();
    if z.is_zero() {
        return Hp::zero(p);
    }
    let half = z.div_i64(2);
    let k64 = i64::from(k);
    // Γ(3/2) Γ(k+3/2) = π (2k+1)!! / 2^(k+2)
    let g = Hp::from_rational(
        &BigRational::new(double_factorial(2 * k64 + 1), BigInt::from(1) << (k + 2)),
        p,
    ) * Hp::pi(p);
    let mut t = half.powi(k as i32 + 1) / g;
    let mut sum = t.clone();
    let z2 = z * z;
    let zf = z.to_f64();
    for m in 0i64.. {
        t = -(&t * &z2).div_i64((2 * m + 3) * (2 * m + 2 * k64 + 3));
        sum = &sum + &t;
        if (m as f64) > zf / 2.0 && negligible(&t, &sum, p) {
            break;
        }
    }
    sum
}

fn negligible(t: &Hp, sum: &Hp, p: usize) -> bool {
    match (t.exponent(), sum.exponent()) {
        (None, _) => true,
        (Some(et), Some(es)) => et < es - p as i64 - 2,
        (Some(_), None) => false,
    }
}

/// Ascending series in `f64` output, evaluated in software floating point.
pub fn bessel_j_series(k: u32, z: f64) -> f64 {
    bessel_j_series_hp(k, &Hp::from_f64(z, series_bits(z))).to_f64()
}

pub fn struve_h_series(k: u32, z: f64) -> f64 {
    struve_h_series_hp(k, &Hp::from_f64(z, series_bits(z))).to_f64()
}

/// Hankel's P and Q sums, truncated at the smallest term of the combined
/// sequence a_m / z^m (at most `ASYMPTOTIC_TERM_CAP` terms each).
fn hankel_pq(k: u32, z: f64) -> (f64, f64) {
    let mu = 4.0 * f64::from(k * k);
    let mut terms = Vec::with_capacity(2 * ASYMPTOTIC_TERM_CAP);
    let mut term = 1.0f64;
    terms.push(term);
    for m in 1..(2 * ASYMPTOTIC_TERM_CAP) {
        let odd = (2 * m - 1) as f64;
        term *= (mu - odd * odd) / (m as f64 * 8.0 * z);
        terms.push(term);
    }
    let last = (0..terms.len())
        .min_by(|&a, &b| terms[a].abs().total_cmp(&terms[b].abs()))
        .unwrap_or(0);
    let (mut p, mut q) = (0.0, 0.0);
    for (m, t) in terms.iter().enumerate().take(last + 1) {
        // a_m / z^m enters P (even m) or Q (odd m) with sign (−1)^floor(m/2).
        let signed = if (m / 2) % 2 == 0 { *t } else { -*t };
        if m % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
    }
    (p, q)
}

/// cos and sin of (2k+1)π/4.
fn phase(k: u32) -> (f64, f64) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match (2 * k + 1) % 8 {
        1 => (r, r),
        3 => (-r, r),
        5 => (-r, -r),
        _ => (r, -r),
    }
}

/// J_k and Y_k from the Hankel expansion, given cos z and sin z.
fn hankel_jy(k: u32, z: f64, cz: f64, sz: f64) -> (f64, f64) {
    let (p, q) = hankel_pq(k, z);
    let (cp, sp) = phase(k);
    // χ = z − (2k+1)π/4
    let cchi = cz * cp + sz * sp;
    let schi = sz * cp - cz * sp;
    let amp = (2.0 / (std::f64::consts::PI * z)).sqrt();
    (amp * (p * cchi - q * schi), amp * (p * schi + q * cchi))
}

/// (1/π) Σ_j Γ(j+1/2) (z/2)^(k−2j−1) / Γ(k+1/2−j), smallest-term truncation.
fn struve_minus_y(k: u32, z: f64) -> f64 {
    let k64 = i64::from(k);
    let h = z / 2.0;
    // Γ(k+1/2) / √π = (2k−1)!! / 2^k
    let g = num_traits::ToPrimitive::to_f64(&BigRational::new(
        double_factorial(2 * k64 - 1),
        BigInt::from(1) << k,
    ))
    .unwrap_or(f64::INFINITY);
    let mut terms = Vec::with_capacity(ASYMPTOTIC_TERM_CAP);
    let mut term = h.powi(k as i32 - 1) / g;
    terms.push(term);
    for j in 0..(ASYMPTOTIC_TERM_CAP - 1) {
        term *= (j as f64 + 0.5) * (k as f64 - 0.5 - j as f64) / (h * h);
        terms.push(term);
    }
    let last = (0..terms.len())
        .min_by(|&a, &b| terms[a].abs().total_cmp(&terms[b].abs()))
        .unwrap_or(0);
    let sum: f64 = crate::compensated::compensated_sum(terms[..=last].iter().copied());
    sum / std::f64::consts::PI
}

pub fn bessel_j_asymptotic(k: u32, z: f64) -> f64 {
    hankel_jy(k, z, z.cos(), z.sin()).0
}

pub fn bessel_y_asymptotic(k: u32, z: f64) -> f64 {
    hankel_jy(k, z, z.cos(), z.sin()).1
}

pub fn struve_h_asymptotic(k: u32, z: f64) -> f64 {
    bessel_y_asymptotic(k, z) + struve_minus_y(k, z)
}

pub fn bessel_j_value(k: u32, z: f64) -> Result<OscFuncValue> {
    check_args(k, z)?;
    let (value, regime) = if z < CROSSOVER {
        (bessel_j_series(k, z), Regime::Series)
    } else {
        (bessel_j_asymptotic(k, z), Regime::Asymptotic)
    };
    Ok(OscFuncValue { order: k, argument: z, kind: OscKind::BesselJ, value, regime })
}

pub fn struve_h_value(k: u32, z: f64) -> Result<OscFuncValue> {
    check_args(k, z)?;
    let (value, regime) = if z < CROSSOVER {
        (struve_h_series(k, z), Regime::Series)
    } else {
        (struve_h_asymptotic(k, z), Regime::Asymptotic)
    };
    Ok(OscFuncValue { order: k, argument: z, kind: OscKind::StruveH, value, regime })
}

/// J_k(z).
pub fn bessel_j(k: u32, z: f64) -> Result<f64> {
    bessel_j_value(k, z).map(|v| v.value)
}

/// H_k(z).
pub fn struve_h(k: u32, z: f64) -> Result<f64> {
    struve_h_value(k, z).map(|v| v.value)
}

fn pi_multiple_series_arg(n: u64) -> Hp {
    let p = series_bits(n as f64 * std::f64::consts::PI);
    Hp::pi(p).mul_i64(n as i64)
}

/// J_k(nπ), using cos nπ = (−1)^n and sin nπ = 0 exactly in the asymptotic regime.
pub fn bessel_j_pi_multiple(k: u32, n: u64) -> Result<f64> {
    check_args(k, 0.0)?;
    let z = n as f64 * std::f64::consts::PI;
    if z < CROSSOVER {
        return Ok(bessel_j_series_hp(k, &pi_multiple_series_arg(n)).to_f64());
    }
    let c = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(hankel_jy(k, z, c, 0.0).0)
}

/// H_k(nπ), with the same exact trigonometry.
pub fn struve_h_pi_multiple(k: u32, n: u64) -> Result<f64> {
    check_args(k, 0.0)?;
    let z = n as f64 * std::f64::consts::PI;
    if z < CROSSOVER {
        return Ok(struve_h_series_hp(k, &pi_multiple_series_arg(n)).to_f64());
    }
    let c = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(hankel_jy(k, z, c, 0.0).1 + struve_minus_y(k, z))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(struve_h(3, 0.0).unwrap(), 0.0);
        let z = 1e-4;
        let h0 = struve_h(0, z).unwrap();
        // H_0(z) = (2/π)(z − z³/9 + …)
        assert!((h0 - 2.0 * (z - z * z * z / 9.0) / std::f64::consts::PI).abs() < 1e-15 * z);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(bessel_j(0, f64::NAN), Err(Error::NonFinite(_))));
        assert!(matches!(struve_h(0, -1.0), Err(Error::OutOfDomain { .. })));
        assert!(bessel_j(13, 1.0).is_err());
    }

    #[test]
    fn regime_follows_crossover() {
        assert_eq!(bessel_j_value(2, 39.9).unwrap().regime, Regime::Series);
        assert_eq!(bessel_j_value(2, 40.0).unwrap().regime, Regime::Asymptotic);
        assert_eq!(struve_h_value(2, 50.0).unwrap().regime, Regime::Asymptotic);
    }

    #[test]
    fn reference_values() {
        // Values from the defining series summed in exact rational arithmetic
        // at z = 1 and z = 10 (see the property tests for the oracle).
        let j0_1 = 0.765_197_686_557_966_6;
        assert!((bessel_j(0, 1.0).unwrap() - j0_1).abs() < 1e-16);
        let j1_10 = 0.043_472_746_168_861_44;
        assert!((bessel_j(1, 10.0).unwrap() - j1_10).abs() < 1e-16);
    }

    #[test]
    fn pi_multiples_match_generic_path() {
        for k in 0..=11 {
            for n in [1u64, 5, 12, 13, 100, 1000] {
                let z = n as f64 * std::f64::consts::PI;
                let a = bessel_j_pi_multiple(k, n).unwrap();
                let b = bessel_j(k, z).unwrap();
                let env = (2.0 / (std::f64::consts::PI * z)).sqrt().max(a.abs());
                assert!((a - b).abs() < 1e-12 * env, "J k={k} n={n}");
                let a = struve_h_pi_multiple(k, n).unwrap();
                let b = struve_h(k, z).unwrap();
                assert!((a - b).abs() < 1e-12 * a.abs().max(env), "H k={k} n={n}");
            }
        }
    }

    #[test]
    fn regimes_agree_near_crossover() {
        for k in 0..=MAX_ORDER {
            for z in [30.0, 40.0, 47.3, 60.0, 100.0, 181.7, 400.0] {
                let env = (2.0 / (std::f64::consts::PI * z)).sqrt();
                let (a, b) = (bessel_j_series(k, z), bessel_j_asymptotic(k, z));
                assert!((a - b).abs() <= 1e-11 * env, "J k={k} z={z}: {a} vs {b}");
                let (a, b) = (struve_h_series(k, z), struve_h_asymptotic(k, z));
                assert!((a - b).abs() <= 1e-11 * a.abs().max(env), "H k={k} z={z}: {a} vs {b}");
            }
        }
    }
}
