//! Integral and polynomial identities behind the coefficient formulas, each
//! checked on a parameter grid: left side by quadrature (or exact arithmetic
//! or a truncated expansion), right side by closed form.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::exactnum::{factorial, gamma_half};
use crate::hp::Hp;
use crate::qmodels::hermite_coeff_bound;
use crate::quadrature::{integrate_batch, integrate_gaussian_tail_batch, BatchResult, GaussianEnvelope, QuadOptions};
use crate::real::{Real, Scalar};
use crate::specfun::{bessel_j, hermite, hermite_all, hyp1f1_neg_int, hyp2f1_term, laguerre, struve_h};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    A1,
    A2,
    A3,
    A4,
    A5,
    A6,
    A7,
    A8,
    A9,
    A10,
    A11,
}

impl CheckId {
    pub const ALL: [CheckId; 11] = [
        CheckId::A1,
        CheckId::A2,
        CheckId::A3,
        CheckId::A4,
        CheckId::A5,
        CheckId::A6,
        CheckId::A7,
        CheckId::A8,
        CheckId::A9,
        CheckId::A10,
        CheckId::A11,
    ];

    /// Pass threshold on `rel_err`.
    pub fn tolerance(self) -> f64 {
        match self {
            CheckId::A3 => 1e-6,
            _ => 1e-8,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckId::A1 => "2F1(-n, nu/2+1; 3/2; 1/2) as a Gaussian integral of 1F1(-n; 3/2; x^2)",
            CheckId::A2 => "H_{2n+1}(x) = (-1)^n (2n+1)!/n! 2x 1F1(-n; 3/2; x^2)",
            CheckId::A3 => "sin(bx), cos(bx) as Hermite series, 30 terms, x in [0, 4]",
            CheckId::A4 => "full-line Hermite orthogonality",
            CheckId::A5 => "full-line x-weighted Hermite integrals",
            CheckId::A6 => "x H_n = H_{n+1}/2 + n H_{n-1}",
            CheckId::A7 => "half-line H_{2n+1} H_{2m} sin(bx) integrals",
            CheckId::A8 => "half-line H_{2n+1} H_{2m+1} cos(bx) integrals",
            CheckId::A9 => "Bessel integral representation and its substituted forms",
            CheckId::A10 => "Struve integral representation and its substituted form",
            CheckId::A11 => "base integrals of the four coefficient formulas",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for CheckId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| invalid(format!("unknown check `{s}`; expected A1..A11")))
    }
}

/// Outcome at one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub id: CheckId,
    pub point: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub note: Option<String>,
}

impl CheckReport {
    /// `scale` is the error denominator used when rhs is exactly zero.
    fn new(id: CheckId, point: String, lhs: f64, rhs: f64, scale: f64) -> Self {
        let denom = if rhs != 0.0 { rhs.abs() } else { scale.abs() };
        let diff = (lhs - rhs).abs();
        let rel_err = if diff == 0.0 { 0.0 } else { diff / denom };
        let tolerance = id.tolerance();
        CheckReport { id, point, lhs, rhs, rel_err, tolerance, pass: rel_err <= tolerance, note: None }
    }

    fn failed(id: CheckId, point: String, err: &Error) -> Self {
        CheckReport {
            id,
            point,
            lhs: f64::NAN,
            rhs: f64::NAN,
            rel_err: f64::INFINITY,
            tolerance: id.tolerance(),
            pass: false,
            note: Some(err.to_string()),
        }
    }

    fn with_note(mut self, note: String) -> Self {
        self.note = Some(note);
        self
    }
}

/// Runs one check over its grid. Failures inside a check become failing reports.
pub fn appendix_check(id: CheckId) -> Vec<CheckReport> {
    let r = match id {
        CheckId::A1 => check_a1(),
        CheckId::A2 => check_a2(),
        CheckId::A3 => check_a3(),
        CheckId::A4 => check_a4(),
        CheckId::A5 => check_a5(),
        CheckId::A6 => check_a6(),
        CheckId::A7 => check_mixed(true),
        CheckId::A8 => check_mixed(false),
        CheckId::A9 => check_a9(),
        CheckId::A10 => check_a10(),
        CheckId::A11 => check_a11(),
    };
    r.unwrap_or_else(|e| vec![CheckReport::failed(id, "grid".into(), &e)])
}

/// All checks, in id order.
pub fn appendix_suite() -> Vec<CheckReport> {
    CheckId::ALL.par_iter().map(|&id| appendix_check(id)).collect::<Vec<_>>().into_iter().flatten().collect()
}

const BITS: usize = 128;
const MAX_N: u32 = 8;
const MAX_NU: u32 = 10;
const HERMITE_OPTS: QuadOptions = QuadOptions { abs_tol: 1e-32, rel_tol: 1e-26, min_level: 3, max_level: 12 };
const F64_OPTS: QuadOptions = QuadOptions { abs_tol: 0.0, rel_tol: 1e-13, min_level: 3, max_level: 12 };

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn b_grid() -> [BigRational; 3] {
    [q(1, 2), q(1, 1), q(2, 1)]
}

fn rf(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn fact(n: u32) -> f64 {
    factorial(u64::from(n)).to_f64().unwrap_or(f64::INFINITY)
}

fn proto() -> Hp {
    Hp::zero(BITS)
}

fn sqrt_pi() -> f64 {
    std::f64::consts::PI.sqrt()
}

fn gamma_nu_half(nu: u32) -> f64 {
    gamma_half(2 * nu + 1).map(|g| g.to_f64()).unwrap_or(f64::NAN)
}

fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Gaussian-weighted half-line batch in software floats.
fn gauss_half_line(env: GaussianEnvelope, m: usize, f: impl Fn(&Hp) -> Vec<Hp> + Sync) -> Result<BatchResult<Hp>> {
    integrate_gaussian_tail_batch(&proto(), &env, m, &HERMITE_OPTS, f)
}

/// Full-line batch: ∫_{−X}^{X} with X from the envelope, both tails bounded.
fn gauss_full_line(env: GaussianEnvelope, m: usize, f: impl Fn(&Hp) -> Vec<Hp> + Sync) -> Result<BatchResult<Hp>> {
    let x = env.truncation_point(HERMITE_OPTS.abs_tol / 20.0)?;
    let hi = proto().lift(x);
    let lo = -hi.clone();
    let mut r = integrate_batch(&lo, &hi, m, &HERMITE_OPTS, |p| f(p.x))?;
    let tail = 2.0 * env.tail_bound(x);
    for e in &mut r.error_estimates {
        *e += tail;
    }
    Ok(r)
}

fn hermite_bound(n: u32) -> f64 {
    hermite_coeff_bound(n).max(1.0)
}

/// A1: F·Γ(ν/2+1) = ∫_0^∞ e^{−2x²} 2^{ν/2+2} x^{ν+1} ₁F₁(−n; 3/2; x²) dx.
fn check_a1() -> Result<Vec<CheckReport>> {
    let coeffs: Vec<Vec<Hp>> = (0..=MAX_N)
        .map(|n| {
            // ₁F₁ coefficients in x², converted once
            let mut r = BigRational::from_integer(1.into());
            let mut out = vec![proto().from_ratio_like(&r)];
            for k in 0..i64::from(n) {
                r *= q(2 * (k - i64::from(n)), (3 + 2 * k) * (k + 1));
                out.push(proto().from_ratio_like(&r));
            }
            out
        })
        .collect();
    let bound: f64 = coeffs
        .iter()
        .map(|c| c.iter().map(|v| v.abs().to_f64()).sum::<f64>())
        .fold(1.0, f64::max);
    let per_nu: Vec<Result<Vec<CheckReport>>> = (0..=MAX_NU)
        .into_par_iter()
        .map(|nu| {
            let env = GaussianEnvelope { rate: 2.0, degree: nu + 2 * MAX_N, coeff_bound: bound };
            let r = gauss_half_line(env, coeffs.len(), |x| {
                let x2 = x.clone() * x.clone();
                let w = (-(x2.clone().mul_i64(2))).exp() * x.powi(nu as i32 + 1);
                coeffs
                    .iter()
                    .map(|c| {
                        let mut acc = proto();
                        for v in c.iter().rev() {
                            acc = acc * &x2 + v;
                        }
                        w.clone() * acc
                    })
                    .collect()
            })?;
            let c = 2f64.powf(f64::from(nu) / 2.0 + 2.0);
            let g = gamma_half(nu + 2)?.to_f64();
            Ok((0..=MAX_N)
                .map(|n| {
                    let i = n as usize;
                    let rhs = hyp2f1_term(n, i64::from(nu) + 2).to_f64() * g;
                    CheckReport::new(
                        CheckId::A1,
                        format!("n={n} nu={nu}"),
                        c * r.values[i].to_f64(),
                        rhs,
                        c * r.l1_norms[i],
                    )
                })
                .collect())
        })
        .collect();
    flatten(per_nu)
}

fn flatten(v: Vec<Result<Vec<CheckReport>>>) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for r in v {
        out.extend(r?);
    }
    Ok(out)
}

fn exact_points() -> [BigRational; 4] {
    [q(7, 10), q(-3, 2), q(2, 1), q(1, 3)]
}

/// A2: Hermite–Kummer relation, exactly at rational x.
fn check_a2() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for x in exact_points() {
        for n in 0..=MAX_N {
            let lhs = hermite(2 * n + 1, &x);
            let k = BigRational::from_integer(factorial(u64::from(2 * n + 1)) / factorial(u64::from(n)));
            let mut rhs = k * q(2, 1) * &x * hyp1f1_neg_int(n, 3, &(&x * &x));
            if n % 2 == 1 {
                rhs = -rhs;
            }
            out.push(exact_report(CheckId::A2, format!("n={n} x={x}"), &lhs, &rhs));
        }
    }
    Ok(out)
}

fn exact_report(id: CheckId, point: String, lhs: &BigRational, rhs: &BigRational) -> CheckReport {
    let mut r = CheckReport::new(id, point, rf(lhs), rf(rhs), 1.0);
    if lhs == rhs {
        r.rel_err = 0.0;
        r.pass = true;
    } else {
        let d = (lhs - rhs).abs();
        let denom = if rhs.is_zero() { BigRational::from_integer(1.into()) } else { rhs.abs() };
        r.rel_err = rf(&(d / denom)).max(f64::MIN_POSITIVE);
        r.pass = false;
    }
    r.note = Some("exact".into());
    r
}

/// Number of terms kept in the truncated sine and cosine expansions.
pub const EXPANSION_TERMS: u32 = 30;

/// Largest |truncated expansion − trig| on the x grid, for sine or cosine.
pub fn expansion_error(b: f64, sine: bool, samples: usize) -> (f64, f64, f64) {
    let p = 192;
    let bh = Hp::from_f64(b, p);
    let pref = (-(bh.clone() * &bh).div_i64(4)).exp();
    let top = 2 * EXPANSION_TERMS + 1;
    let mut worst = (0.0, 0.0, 0.0);
    for i in 0..samples {
        let x = 4.0 * i as f64 / (samples - 1) as f64;
        let xh = Hp::from_f64(x, p);
        let h = hermite_all(top, &xh);
        let mut acc = Hp::zero(p);
        let half_b = bh.div_i64(2);
        // c_k = (b/2)^k / k!, alternating in pairs
        let mut c = Hp::one(p);
        for k in 0..=top {
            if k > 0 {
                c = c * &half_b / Hp::from_i64(i64::from(k), p);
            }
            let keep = if sine { k % 2 == 1 } else { k % 2 == 0 };
            if keep && (k / 2) < EXPANSION_TERMS {
                let term = c.clone() * &h[k as usize];
                acc = if (k / 2) % 2 == 0 { acc + term } else { acc - term };
            }
        }
        let approx = (acc * &pref).to_f64();
        let exact = if sine { (b * x).sin() } else { (b * x).cos() };
        let err = (approx - exact).abs();
        if err >= worst.0 {
            worst = (err, approx, x);
        }
    }
    worst
}

/// A3: truncated Hermite expansions of sin(bx) and cos(bx).
fn check_a3() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for b in b_grid() {
        let bf = rf(&b);
        for sine in [true, false] {
            let (err, approx, x) = expansion_error(bf, sine, 81);
            let exact = if sine { (bf * x).sin() } else { (bf * x).cos() };
            let name = if sine { "sin" } else { "cos" };
            let mut r = CheckReport::new(CheckId::A3, format!("{name} b={b} worst x={x}"), approx, exact, 1.0);
            // absolute error on functions bounded by 1
            r.rel_err = err;
            r.pass = err <= r.tolerance;
            out.push(r.with_note(format!("max abs error over x in [0,4]: {err:e}")));
        }
    }
    Ok(out)
}

fn hermite_pair_env(extra_degree: u32) -> GaussianEnvelope {
    let c = hermite_bound(MAX_N);
    GaussianEnvelope { rate: 1.0, degree: 2 * MAX_N + extra_degree, coeff_bound: c * c }
}

/// ∫ e^{−x²} x^w H_n H_m for all n, m ≤ 8, as a flat n-major vector.
fn pair_integrand(x: &Hp, weight_power: i32) -> Vec<Hp> {
    let h = hermite_all(MAX_N, x);
    let w = (-(x.clone() * x)).exp() * x.powi(weight_power);
    let mut out = Vec::with_capacity(h.len() * h.len());
    for hn in &h {
        let a = w.clone() * hn;
        for hm in &h {
            out.push(a.clone() * hm);
        }
    }
    out
}

/// A4: ∫_ℝ e^{−x²} H_n H_m = 2^n n! √π δ_{nm}.
fn check_a4() -> Result<Vec<CheckReport>> {
    let k = (MAX_N + 1) as usize;
    let r = gauss_full_line(hermite_pair_env(0), k * k, |x| pair_integrand(x, 0))?;
    let mut out = Vec::new();
    for n in 0..=MAX_N {
        for m in 0..=MAX_N {
            let i = n as usize * k + m as usize;
            let rhs = if n == m { 2f64.powi(n as i32) * fact(n) * sqrt_pi() } else { 0.0 };
            out.push(CheckReport::new(CheckId::A4, format!("n={n} m={m}"), r.values[i].to_f64(), rhs, r.l1_norms[i]));
        }
    }
    Ok(out)
}

/// Right side of the x-weighted relation: 2^{n−1} n! √π (δ_{n−1,m} + 2(n+1) δ_{n+1,m}).
pub fn a5_rhs(n: u32, m: u32) -> f64 {
    let base = 2f64.powi(n as i32 - 1) * fact(n) * sqrt_pi();
    if n >= 1 && m == n - 1 {
        base
    } else if m == n + 1 {
        base * 2.0 * f64::from(n + 1)
    } else {
        0.0
    }
}

/// A5: the x-weighted relation read on the full line, with the half-line value noted.
fn check_a5() -> Result<Vec<CheckReport>> {
    let k = (MAX_N + 1) as usize;
    let env = hermite_pair_env(1);
    let full = gauss_full_line(env, k * k, |x| pair_integrand(x, 1))?;
    let half = gauss_half_line(env, k * k, |x| pair_integrand(x, 1))?;
    let mut out = Vec::new();
    for n in 0..=MAX_N {
        for m in 0..=MAX_N {
            let i = n as usize * k + m as usize;
            let rhs = a5_rhs(n, m);
            let h = half.values[i].to_f64();
            let half_matches = CheckReport::new(CheckId::A5, String::new(), h, rhs, half.l1_norms[i]).pass;
            let note = format!(
                "full line; half-line integral = {h:e} ({} the stated value)",
                if half_matches { "matches" } else { "differs from" }
            );
            out.push(
                CheckReport::new(CheckId::A5, format!("n={n} m={m}"), full.values[i].to_f64(), rhs, full.l1_norms[i])
                    .with_note(note),
            );
        }
    }
    Ok(out)
}

/// A6: x H_n(x) = H_{n+1}(x)/2 + n H_{n−1}(x), exactly at rational x.
fn check_a6() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for x in exact_points() {
        let h = hermite_all(MAX_N + 1, &x);
        for n in 0..=MAX_N {
            let i = n as usize;
            let lhs = &x * &h[i];
            let mut rhs = &h[i + 1] / q(2, 1);
            if n > 0 {
                rhs += BigRational::from_integer(n.into()) * &h[i - 1];
            }
            out.push(exact_report(CheckId::A6, format!("n={n} x={x}"), &lhs, &rhs));
        }
    }
    Ok(out)
}

const MIXED_N: u32 = 4;

/// Right side of the sin (A7) or cos (A8) mixed-parity integral.
pub fn mixed_rhs(sine: bool, n: u32, m: u32, b: &BigRational) -> f64 {
    let y = b * b;
    let (deg, q_par, pow) = if sine {
        (2 * m, 2 * i64::from(n) + 1 - 2 * i64::from(m), 2 * n as i32 + 1 - 2 * m as i32)
    } else {
        (2 * m + 1, 2 * i64::from(n) - 2 * i64::from(m), 2 * n as i32 - 2 * m as i32)
    };
    let l = rf(&laguerre(deg, q_par, &(y.clone() / q(2, 1))));
    let bf = rf(b);
    sign(n + m) / 2.0 * fact(deg) * 2f64.powi(deg as i32) * sqrt_pi() * bf.powi(pow) * (-rf(&y) / 4.0).exp() * l
}

/// A7 (sine) / A8 (cosine): half-line H_{2n+1} H_{2m or 2m+1} trig(bx) integrals, n, m ≤ 4.
fn check_mixed(sine: bool) -> Result<Vec<CheckReport>> {
    let id = if sine { CheckId::A7 } else { CheckId::A8 };
    let k = (MIXED_N + 1) as usize;
    let c = hermite_bound(2 * MIXED_N + 1);
    let env = GaussianEnvelope { rate: 1.0, degree: 4 * MIXED_N + 2, coeff_bound: c * c };
    let per_b: Vec<Result<Vec<CheckReport>>> = b_grid()
        .into_par_iter()
        .map(|b| {
            let bh = proto().from_ratio_like(&b);
            let r = gauss_half_line(env, k * k, |x| {
                let h = hermite_all(2 * MIXED_N + 1, x);
                let bx = bh.clone() * x;
                let t = if sine { bx.sin() } else { bx.cos() };
                let w = (-(x.clone() * x)).exp() * t;
                let mut out = Vec::with_capacity(k * k);
                for n in 0..=MIXED_N {
                    let a = w.clone() * &h[(2 * n + 1) as usize];
                    for m in 0..=MIXED_N {
                        let j = if sine { 2 * m } else { 2 * m + 1 };
                        out.push(a.clone() * &h[j as usize]);
                    }
                }
                out
            })?;
            let mut out = Vec::new();
            for n in 0..=MIXED_N {
                for m in 0..=MIXED_N {
                    let i = n as usize * k + m as usize;
                    out.push(CheckReport::new(
                        id,
                        format!("n={n} m={m} b={b}"),
                        r.values[i].to_f64(),
                        mixed_rhs(sine, n, m, &b),
                        r.l1_norms[i],
                    ));
                }
            }
            Ok(out)
        })
        .collect();
    flatten(per_b)
}

fn z_grid() -> [f64; 3] {
    [1.0, std::f64::consts::PI, 10.0]
}

fn u_a_grid() -> Vec<(f64, f64, &'static str)> {
    let pi = std::f64::consts::PI;
    vec![(0.5, pi, "u=1/2 a=pi"), (0.5, 3.0 * pi, "u=1/2 a=3pi"), (1.0, pi, "u=1 a=pi"), (1.0, 3.0 * pi, "u=1 a=3pi")]
}

/// (1−t²)^{ν−1/2} trig(zt) over t ∈ [0, 1] for ν = 0..=10, sharing nodes.
fn unit_representation(z: f64, sine: bool) -> Result<BatchResult<f64>> {
    let m = (MAX_NU + 1) as usize;
    integrate_batch(&0.0, &1.0, m, &F64_OPTS, |p| {
        let s = p.to_hi * (1.0 + p.x);
        let base = 1.0 / s.sqrt();
        let t = if sine { (z * p.x).sin() } else { (z * p.x).cos() };
        (0..=MAX_NU).map(|nu| base * s.powi(nu as i32) * t).collect()
    })
}

/// J_ν(z) = 2 (z/2)^ν/(Γ(ν+1/2)√π) ∫_0^1 (1−t²)^{ν−1/2} cos(zt) dt.
fn bessel_representation() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for z in z_grid() {
        let r = unit_representation(z, false)?;
        for nu in 0..=MAX_NU {
            let c = 2.0 * (z / 2.0).powi(nu as i32) / (gamma_nu_half(nu) * sqrt_pi());
            let i = nu as usize;
            out.push(CheckReport::new(
                CheckId::A9,
                format!("rep nu={nu} z={z}"),
                c * r.values[i],
                bessel_j(nu, z)?,
                c * r.l1_norms[i],
            ));
        }
    }
    Ok(out)
}

/// H_ν(z) = 2 (z/2)^ν/(√π Γ(ν+1/2)) ∫_0^1 (1−t²)^{ν−1/2} sin(zt) dt.
fn struve_representation() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for z in z_grid() {
        let r = unit_representation(z, true)?;
        for nu in 0..=MAX_NU {
            let c = 2.0 * (z / 2.0).powi(nu as i32) / (gamma_nu_half(nu) * sqrt_pi());
            let i = nu as usize;
            out.push(CheckReport::new(
                CheckId::A10,
                format!("rep nu={nu} z={z}"),
                c * r.values[i],
                struve_h(nu, z)?,
                c * r.l1_norms[i],
            ));
        }
    }
    Ok(out)
}

/// ∫_0^u x^w (u²−x²)^{ν+shift} trig(ãx) dx for ν = 0..=10, shift ∈ {−1/2, +1/2}.
fn finite_batch(u: f64, a: f64, x_power: i32, plus_half: bool, sine: bool) -> Result<BatchResult<f64>> {
    let m = (MAX_NU + 1) as usize;
    integrate_batch(&0.0, &u, m, &F64_OPTS, |p| {
        let s = p.to_hi * (u + p.x);
        let base = if plus_half { s.sqrt() } else { 1.0 / s.sqrt() };
        let t = if sine { (a * p.x).sin() } else { (a * p.x).cos() };
        let w = base * t * p.x.powi(x_power);
        (0..=MAX_NU).map(|nu| w * s.powi(nu as i32)).collect()
    })
}

/// ∫_0^u x (u²−x²)^{ν−1/2} sin(ãx) dx = (√π/2) u (2u/ã)^ν Γ(ν+1/2) J_{ν+1}(ãu).
fn bessel_sine_form(id: CheckId) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (u, a, label) in u_a_grid() {
        let r = finite_batch(u, a, 1, false, true)?;
        for nu in 0..=MAX_NU {
            let rhs = sqrt_pi() / 2.0 * u * (2.0 * u / a).powi(nu as i32) * gamma_nu_half(nu) * bessel_j(nu + 1, a * u)?;
            let i = nu as usize;
            out.push(CheckReport::new(id, format!("sin nu={nu} {label}"), r.values[i], rhs, r.l1_norms[i]));
        }
    }
    Ok(out)
}

/// ∫_0^u (u²−x²)^{ν−1/2} sin(ãx) dx = (√π/2)(2u/ã)^ν Γ(ν+1/2) H_ν(ãu).
fn struve_sine_form(id: CheckId) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for (u, a, label) in u_a_grid() {
        let r = finite_batch(u, a, 0, false, true)?;
        for nu in 0..=MAX_NU {
            let rhs = sqrt_pi() / 2.0 * (2.0 * u / a).powi(nu as i32) * gamma_nu_half(nu) * struve_h(nu, a * u)?;
            let i = nu as usize;
            out.push(CheckReport::new(id, format!("sin nu={nu} {label}"), r.values[i], rhs, r.l1_norms[i]));
        }
    }
    Ok(out)
}

/// A9: the Bessel representation, the cosine form before partial integration,
/// and the sine form used by the F3 coefficients.
fn check_a9() -> Result<Vec<CheckReport>> {
    let mut out = bessel_representation()?;
    for (u, a, label) in u_a_grid() {
        // 2 ∫_0^u (u²−l²)^{ν+1/2} cos(ãl) dl = J_{ν+1}(ãu)(ν+1/2)Γ(ν+1/2)√π(2u/ã)^{ν+1}
        let r = finite_batch(u, a, 0, true, false)?;
        for nu in 0..=MAX_NU {
            let rhs = bessel_j(nu + 1, a * u)? * (f64::from(nu) + 0.5) * gamma_nu_half(nu) * sqrt_pi()
                * (2.0 * u / a).powi(nu as i32 + 1);
            let i = nu as usize;
            out.push(CheckReport::new(CheckId::A9, format!("cos nu={nu} {label}"), 2.0 * r.values[i], rhs, 2.0 * r.l1_norms[i]));
        }
    }
    out.extend(bessel_sine_form(CheckId::A9)?);
    Ok(out)
}

/// A10: the Struve representation and its substituted form (dx, not dt).
fn check_a10() -> Result<Vec<CheckReport>> {
    let mut out = struve_representation()?;
    out.extend(struve_sine_form(CheckId::A10)?);
    Ok(out)
}

/// A11: the base integrals behind the four coefficient formulas.
fn check_a11() -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    // ∫_0^∞ e^{−2x²} x^ν H_{2n+1} dx = (−1)^n 2^{2n−ν/2} Γ(ν/2+1) Γ(n+3/2) F / √π
    let top = 2 * MAX_N + 1;
    let hb = hermite_bound(top);
    let per_nu: Vec<Result<Vec<CheckReport>>> = (0..=MAX_NU)
        .into_par_iter()
        .map(|nu| {
            let env = GaussianEnvelope { rate: 2.0, degree: nu + top, coeff_bound: hb };
            let r = gauss_half_line(env, (MAX_N + 1) as usize, |x| {
                let h = hermite_all(top, x);
                let w = (-(x.clone() * x).mul_i64(2)).exp() * x.powi(nu as i32);
                (0..=MAX_N).map(|n| w.clone() * &h[(2 * n + 1) as usize]).collect()
            })?;
            let g1 = gamma_half(nu + 2)?.to_f64();
            Ok((0..=MAX_N)
                .map(|n| {
                    let f = hyp2f1_term(n, i64::from(nu) + 2).to_f64();
                    let rhs = sign(n) * 2f64.powf(2.0 * f64::from(n) - f64::from(nu) / 2.0) * g1
                        * gamma_half(2 * n + 3).map(|g| g.to_f64()).unwrap_or(f64::NAN)
                        / sqrt_pi()
                        * f;
                    let i = n as usize;
                    CheckReport::new(CheckId::A11, format!("gauss n={n} nu={nu}"), r.values[i].to_f64(), rhs, r.l1_norms[i])
                })
                .collect())
        })
        .collect();
    out.extend(flatten(per_nu)?);

    // ∫_0^∞ e^{−x²} H_{2n+1} sin(bx) and ∫_0^∞ e^{−x²} H_1 H_{2n+1} cos(bx)
    let env = GaussianEnvelope { rate: 1.0, degree: top + 1, coeff_bound: 2.0 * hb };
    for b in b_grid() {
        let bh = proto().from_ratio_like(&b);
        let r = gauss_half_line(env, 2 * (MAX_N + 1) as usize, |x| {
            let h = hermite_all(top, x);
            let bx = bh.clone() * x;
            let g = (-(x.clone() * x)).exp();
            let ws = g.clone() * bx.sin();
            let wc = g * bx.cos() * &h[1];
            let mut v: Vec<Hp> = (0..=MAX_N).map(|n| ws.clone() * &h[(2 * n + 1) as usize]).collect();
            v.extend((0..=MAX_N).map(|n| wc.clone() * &h[(2 * n + 1) as usize]));
            v
        })?;
        let bf = rf(&b);
        let y = bf * bf;
        let e = (-y / 4.0).exp();
        let k = (MAX_N + 1) as usize;
        for n in 0..=MAX_N {
            let i = n as usize;
            let rhs = sign(n) / 2.0 * sqrt_pi() * bf.powi(2 * n as i32 + 1) * e;
            out.push(CheckReport::new(CheckId::A11, format!("sin n={n} b={b}"), r.values[i].to_f64(), rhs, r.l1_norms[i]));
            let l = f64::from(2 * n + 1) - y / 2.0;
            let rhs = sign(n) * sqrt_pi() * bf.powi(2 * n as i32) * e * l;
            out.push(CheckReport::new(
                CheckId::A11,
                format!("cos n={n} b={b}"),
                r.values[k + i].to_f64(),
                rhs,
                r.l1_norms[k + i],
            ));
        }
    }
    out.extend(bessel_sine_form(CheckId::A11)?);
    out.extend(struve_sine_form(CheckId::A11)?);
    Ok(out)
}
