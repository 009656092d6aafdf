//! The two model eigenbases and the four trial-function families.
//!
//! Half oscillator (α = 1, x > 0): ψ_n(x) = H_{2n+1}(x) e^{−x²/2} / √(2^{2n}(2n+1)!√π), n ≥ 0.
//! Infinite well on (0, a): φ_n(x) = √(2/a) sin(nπx/a), n ≥ 1.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::error::{invalid, Error, Result};
use crate::exactnum::{factorial, gamma_half, ClosedFormConstant, ExactScalar};
use crate::quadrature::{integrate_batch, GaussianEnvelope, Point, QuadOptions};
use crate::real::Real;
use crate::specfun::{hermite, hermite_coefficients};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenbasis {
    HalfOscillator,
    InfiniteWell { width: BigRational },
}

impl Eigenbasis {
    pub fn well(width: BigRational) -> Result<Self> {
        if !width.is_positive() {
            return Err(invalid("well width must be positive"));
        }
        Ok(Eigenbasis::InfiniteWell { width })
    }

    /// Lowest eigenstate index.
    pub fn first_index(&self) -> u64 {
        match self {
            Eigenbasis::HalfOscillator => 0,
            Eigenbasis::InfiniteWell { .. } => 1,
        }
    }

    fn check_domain(&self, x: f64) -> Result<()> {
        if !x.is_finite() {
            return Err(Error::NonFinite(x));
        }
        match self {
            Eigenbasis::HalfOscillator if x < 0.0 => {
                Err(Error::OutOfDomain { x, domain: "x >= 0".into() })
            }
            Eigenbasis::InfiniteWell { width } if x < 0.0 || x > ratio_f64(width) => {
                Err(Error::OutOfDomain { x, domain: format!("0 <= x <= {width}") })
            }
            _ => Ok(()),
        }
    }
}

fn ratio_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Normalized eigenfunction of either basis at x.
pub fn eigenfunction(basis: &Eigenbasis, n: u64, x: f64) -> Result<f64> {
    basis.check_domain(x)?;
    match basis {
        Eigenbasis::HalfOscillator => {
            let n = usize::try_from(n).map_err(|_| invalid("index too large"))?;
            Ok(OscillatorTable::new(&x, n).eval_all(&x)[n])
        }
        Eigenbasis::InfiniteWell { width } => {
            if n == 0 {
                return Err(invalid("well states start at n = 1"));
            }
            let a = ratio_f64(width);
            Ok((2.0 / a).sqrt() * (n as f64 * std::f64::consts::PI * x / a).sin())
        }
    }
}

/// ψ_0 … ψ_nmax at one point, by the normalized Hermite-function recurrence
/// h_{k+1} = √(2/(k+1)) x h_k − √(k/(k+1)) h_{k−1}, ψ_n = √2 h_{2n+1}.
pub struct OscillatorTable<R> {
    nmax: usize,
    up: Vec<R>,
    down: Vec<R>,
    h0_scale: R,
    sqrt2: R,
}

impl<R: Real> OscillatorTable<R> {
    pub fn new(proto: &R, nmax: usize) -> Self {
        let kmax = 2 * nmax + 1;
        let up = (0..kmax).map(|k| proto.from_int_like(2).div_int(k as i64 + 1).sqrt()).collect();
        let down = (0..kmax)
            .map(|k| proto.from_int_like(k as i64).div_int(k as i64 + 1).sqrt())
            .collect();
        // π^(−1/4)
        let h0_scale = proto.from_int_like(1) / proto.pi_like().sqrt().sqrt();
        OscillatorTable { nmax, up, down, h0_scale, sqrt2: proto.from_int_like(2).sqrt() }
    }

    pub fn eval_all(&self, x: &R) -> Vec<R> {
        let mut prev = self.h0_scale.clone() * (-(x.clone() * x.clone()).div_int(2)).exp();
        let mut cur = self.up[0].clone() * x.clone() * prev.clone();
        let mut out = Vec::with_capacity(self.nmax + 1);
        out.push(self.sqrt2.clone() * cur.clone());
        for k in 1..(2 * self.nmax + 1) {
            let next = self.up[k].clone() * x.clone() * cur.clone() - self.down[k].clone() * prev;
            prev = cur;
            cur = next;
            if k % 2 == 0 {
                out.push(self.sqrt2.clone() * cur.clone());
            }
        }
        out
    }
}

/// φ_1 … φ_nmax at one point by the sine recurrence s_{n+1} = 2 cos θ s_n − s_{n−1}.
pub fn well_all<R: Real>(a: &R, nmax: usize, x: &R) -> Vec<R> {
    let theta = x.pi_like() * x.clone() / a.clone();
    let c2 = theta.cos() + theta.cos();
    let amp = (x.from_int_like(2) / a.clone()).sqrt();
    let mut prev = x.from_int_like(0);
    let mut cur = theta.sin();
    let mut out = Vec::with_capacity(nmax);
    for _ in 0..nmax {
        out.push(amp.clone() * cur.clone());
        let next = c2.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    F1,
    F2,
    F3,
    F4,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::F1 => "f1",
            Family::F2 => "f2",
            Family::F3 => "f3",
            Family::F4 => "f4",
        })
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "f1" => Ok(Family::F1),
            "f2" => Ok(Family::F2),
            "f3" => Ok(Family::F3),
            "f4" => Ok(Family::F4),
            other => Err(invalid(format!("unknown family `{other}`"))),
        }
    }
}

/// A trial function up to normalization.
///
/// F1: e^{−3x²/2} x^ν; F2: H_ν(x) e^{−x²/2} sin(bx) (ν even) or cos(bx) (ν odd);
/// F3: x (a² − x²)^{ν−1/2}; F4: (a² − x²)^{ν−1/2}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrialFamily {
    F1 { nu: u32 },
    F2 { nu: u32, b: BigRational },
    F3 { nu: u32, a: BigRational },
    F4 { nu: u32, a: BigRational },
}

impl TrialFamily {
    pub fn f1(nu: u32) -> Self {
        TrialFamily::F1 { nu }
    }

    pub fn f2(nu: u32, b: BigRational) -> Result<Self> {
        if !b.is_positive() {
            return Err(invalid("b must be positive"));
        }
        Ok(TrialFamily::F2 { nu, b })
    }

    pub fn f3(nu: u32, a: BigRational) -> Result<Self> {
        if nu == 0 {
            return Err(invalid("F3 needs nu >= 1"));
        }
        if !a.is_positive() {
            return Err(invalid("well width must be positive"));
        }
        Ok(TrialFamily::F3 { nu, a })
    }

    pub fn f4(nu: u32, a: BigRational) -> Result<Self> {
        if nu == 0 {
            return Err(invalid("F4 needs nu >= 1"));
        }
        if !a.is_positive() {
            return Err(invalid("well width must be positive"));
        }
        Ok(TrialFamily::F4 { nu, a })
    }

    pub fn family(&self) -> Family {
        match self {
            TrialFamily::F1 { .. } => Family::F1,
            TrialFamily::F2 { .. } => Family::F2,
            TrialFamily::F3 { .. } => Family::F3,
            TrialFamily::F4 { .. } => Family::F4,
        }
    }

    pub fn nu(&self) -> u32 {
        match self {
            TrialFamily::F1 { nu } | TrialFamily::F2 { nu, .. } => *nu,
            TrialFamily::F3 { nu, .. } | TrialFamily::F4 { nu, .. } => *nu,
        }
    }

    pub fn basis(&self) -> Eigenbasis {
        match self {
            TrialFamily::F1 { .. } | TrialFamily::F2 { .. } => Eigenbasis::HalfOscillator,
            TrialFamily::F3 { a, .. } | TrialFamily::F4 { a, .. } => {
                Eigenbasis::InfiniteWell { width: a.clone() }
            }
        }
    }

    /// False for the functions that do not vanish at a wall: F1 ν=0 and every F4.
    pub fn regular(&self) -> bool {
        match self {
            TrialFamily::F1 { nu } => *nu > 0,
            TrialFamily::F4 { .. } => false,
            _ => true,
        }
    }

    /// Unnormalized value. `to_wall` is a − x for the well families when the
    /// caller knows it more accurately than `a − x` would compute it.
    pub fn eval_raw<R: Real>(&self, x: &R, to_wall: Option<&R>) -> R {
        match self {
            TrialFamily::F1 { nu } => {
                (-(x.clone() * x.clone()).div_int(2) * x.from_int_like(3)).exp() * x.powi(*nu as i32)
            }
            TrialFamily::F2 { nu, b } => {
                let bx = x.from_ratio_like(b) * x.clone();
                let trig = if nu % 2 == 0 { bx.sin() } else { bx.cos() };
                hermite(*nu, x) * (-(x.clone() * x.clone()).div_int(2)).exp() * trig
            }
            TrialFamily::F3 { nu, a } => x.clone() * wall_factor(*nu, a, x, to_wall),
            TrialFamily::F4 { nu, a } => wall_factor(*nu, a, x, to_wall),
        }
    }

    /// Exact squared normalization where one exists.
    pub fn exact_norm_sq(&self) -> Result<Option<ClosedFormConstant>> {
        Ok(Some(match self {
            TrialFamily::F1 { nu } => {
                // 2 · 3^ν · √3 / Γ(ν + 1/2)
                let g = gamma_half(2 * nu + 1)?;
                let top = ExactScalar::from_integer(BigInt::from(2) * num_traits::pow(BigInt::from(3), *nu as usize));
                ClosedFormConstant::new(top.checked_div(&g)?, 0, 1)
            }
            TrialFamily::F3 { nu, a } => {
                // 2 Γ(2ν+3/2) / (a^{4ν+1} Γ(3/2) Γ(2ν))
                let num = gamma_half(4 * nu + 3)?.mul_rational(&BigRational::from_integer(2.into()));
                let den = gamma_half(3)?
                    * ExactScalar::from_integer(factorial(u64::from(2 * nu - 1)))
                    * ExactScalar::from_rational(num_traits::pow(a.clone(), (4 * nu + 1) as usize));
                ClosedFormConstant::from(num.checked_div(&den)?)
            }
            TrialFamily::F4 { nu, a } => {
                // 2 / (a^{4ν−1} B(1/2, 2ν)), B(1/2, 2ν) = Γ(1/2) Γ(2ν) / Γ(2ν + 1/2)
                let beta = gamma_half(1)?
                    .checked_div(&gamma_half(4 * nu + 1)?)?
                    .mul_rational(&BigRational::from_integer(factorial(u64::from(2 * nu - 1))));
                let den = beta.mul_rational(&num_traits::pow(a.clone(), (4 * nu - 1) as usize));
                ClosedFormConstant::from(ExactScalar::from_integer(2).checked_div(&den)?)
            }
            TrialFamily::F2 { .. } => return Ok(None),
        }))
    }

    /// Squared normalization constant.
    pub fn norm_sq(&self) -> Result<NormSq> {
        if let Some(c) = self.exact_norm_sq()? {
            return Ok(NormSq::Exact(c));
        }
        let TrialFamily::F2 { nu, b } = self else {
            unreachable!("only F2 lacks an exact norm")
        };
        let y = ratio_f64(b) * ratio_f64(b);
        let sqrt_pi = std::f64::consts::PI.sqrt();
        match nu {
            0 => Ok(NormSq::Formula(4.0 / (sqrt_pi * -(-y).exp_m1()))),
            1 => Ok(NormSq::Formula(2.0 / (sqrt_pi * (1.0 + (1.0 - 2.0 * y) * (-y).exp())))),
            _ => {
                let (value, error_estimate) = f2_norm_by_quadrature(*nu, b)?;
                Ok(NormSq::Quadrature { value: 1.0 / value, error_estimate: error_estimate / (value * value) })
            }
        }
    }

    /// Normalized value at x (domain-checked).
    pub fn eval(&self, norm: &NormSq, x: f64) -> Result<f64> {
        self.basis().check_domain(x)?;
        Ok(norm.value().sqrt() * self.eval_raw(&x, None))
    }
}

impl fmt::Display for TrialFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrialFamily::F1 { nu } => write!(f, "f1 nu={nu}"),
            TrialFamily::F2 { nu, b } => write!(f, "f2 nu={nu} b={b}"),
            TrialFamily::F3 { nu, a } => write!(f, "f3 nu={nu} a={a}"),
            TrialFamily::F4 { nu, a } => write!(f, "f4 nu={nu} a={a}"),
        }
    }
}

/// (a² − x²)^{ν−1/2} = (a−x)^{ν−1/2} (a+x)^{ν−1/2}.
fn wall_factor<R: Real>(nu: u32, a: &BigRational, x: &R, to_wall: Option<&R>) -> R {
    let ar = x.from_ratio_like(a);
    let d = match to_wall {
        Some(d) => d.clone(),
        None => ar.clone() - x.clone(),
    };
    if d.to_f64() <= 0.0 {
        return x.from_int_like(0);
    }
    let s = ar + x.clone();
    let p = d * s;
    p.powi(nu as i32) / p.sqrt()
}

/// Squared normalization constant and its provenance.
#[derive(Clone, Debug, PartialEq)]
pub enum NormSq {
    Exact(ClosedFormConstant),
    /// Closed form involving e^{b²}, evaluated in floating point.
    Formula(f64),
    Quadrature { value: f64, error_estimate: f64 },
}

impl NormSq {
    pub fn value(&self) -> f64 {
        match self {
            NormSq::Exact(c) => c.to_f64(),
            NormSq::Formula(v) => *v,
            NormSq::Quadrature { value, .. } => *value,
        }
    }
}

/// A normalized trial function.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialFunction {
    pub family: TrialFamily,
    pub norm_sq: NormSq,
    pub regular: bool,
}

impl TrialFunction {
    pub fn new(family: TrialFamily) -> Result<Self> {
        let norm_sq = family.norm_sq()?;
        let regular = family.regular();
        Ok(TrialFunction { family, norm_sq, regular })
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.family.eval(&self.norm_sq, x)
    }
}

pub fn normalization_sq(family: &TrialFamily) -> Result<NormSq> {
    family.norm_sq()
}

/// Σ |coefficients of H_ν|, a bound for |H_ν(x)| / (1+x)^ν on x ≥ 0.
pub fn hermite_coeff_bound(nu: u32) -> f64 {
    hermite_coefficients(nu).iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum()
}

/// ∫_0^∞ (H_ν e^{−x²/2} trig(bx))² dx with relative tolerance 1e-12.
fn f2_norm_by_quadrature(nu: u32, b: &BigRational) -> Result<(f64, f64)> {
    let fam = TrialFamily::F2 { nu, b: b.clone() };
    let c = hermite_coeff_bound(nu);
    let env = GaussianEnvelope { rate: 1.0, degree: 2 * nu, coeff_bound: c * c };
    // The integral is at least of order 2^ν ν! √π / 8, so this cut is relative.
    let scale = 2f64.powi(nu as i32) * factorial(u64::from(nu)).to_f64().unwrap_or(f64::MAX) * 0.2;
    let x = env.truncation_point(1e-14 * scale)?;
    let opts = QuadOptions::relative(1e-12).with_max_level(14);
    let r = integrate_batch(&0.0, &x, 1, &opts, |p: Point<'_, f64>| {
        let v = fam.eval_raw(p.x, None);
        vec![v * v]
    })?;
    if r.values[0] <= 0.0 {
        return Err(invalid("F2 norm quadrature returned a non-positive value"));
    }
    Ok((r.values[0], r.error_estimates[0] + env.tail_bound(x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_with;
    use std::f64::consts::PI;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn well_values() {
        let basis = Eigenbasis::well(q(2, 1)).unwrap();
        assert!((eigenfunction(&basis, 1, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(eigenfunction(&basis, 2, 1.0).unwrap().abs() < 1e-15);
        assert!(eigenfunction(&basis, 1, 2.5).is_err());
        assert!(eigenfunction(&basis, 0, 0.5).is_err());
    }

    #[test]
    fn oscillator_matches_direct_formula() {
        let basis = Eigenbasis::HalfOscillator;
        for n in 0..6u64 {
            for x in [0.3, 1.0, 2.7] {
                let h = crate::specfun::hermite_f64(2 * n as u32 + 1, x);
                let norm = (4f64.powi(n as i32)
                    * factorial(2 * n + 1).to_f64().unwrap()
                    * PI.sqrt())
                .sqrt();
                let direct = h * (-x * x / 2.0).exp() / norm;
                let v = eigenfunction(&basis, n, x).unwrap();
                assert!((v - direct).abs() < 1e-14, "n={n} x={x}");
            }
        }
        assert!(eigenfunction(&basis, 0, -1.0).is_err());
    }

    #[test]
    fn table_norms() {
        let a2 = TrialFamily::f1(1).exact_norm_sq().unwrap().unwrap();
        assert_eq!(a2, "12 * sqrt3^1 * sqrtpi^-1".parse().unwrap());
        let b2 = TrialFamily::f3(1, q(1, 1)).unwrap().exact_norm_sq().unwrap().unwrap();
        assert_eq!(b2, "15/2".parse().unwrap());
        let c2 = TrialFamily::f4(1, q(1, 1)).unwrap().exact_norm_sq().unwrap().unwrap();
        assert_eq!(c2, "3/2".parse().unwrap());
    }

    #[test]
    fn table1_norm_column() {
        // A² for ν = 2, 3 as listed: 24√3/√π and 144√3/(5√π)
        assert_eq!(
            TrialFamily::f1(2).exact_norm_sq().unwrap().unwrap(),
            "24 * sqrt3^1 * sqrtpi^-1".parse().unwrap()
        );
        assert_eq!(
            TrialFamily::f1(3).exact_norm_sq().unwrap().unwrap(),
            "144/5 * sqrt3^1 * sqrtpi^-1".parse().unwrap()
        );
    }

    #[test]
    fn regularity() {
        assert!(!TrialFamily::f1(0).regular());
        assert!(TrialFamily::f1(1).regular());
        assert!(!TrialFamily::f4(2, q(1, 1)).unwrap().regular());
        assert!(TrialFamily::f3(2, q(1, 1)).unwrap().regular());
    }

    #[test]
    fn discontinuous_boundary_value() {
        let t = TrialFunction::new(TrialFamily::f1(0)).unwrap();
        let expected = (2.0 * 3f64.sqrt() / PI.sqrt()).sqrt();
        assert!((t.eval(0.0).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn f2_norm_matches_laguerre_closed_form() {
        // ∫_0^∞ H_ν² e^{−x²} trig²(bx) dx = (√π/4) 2^ν ν! (1 ∓ e^{−y} L_ν(2y)),
        // minus for sine (even ν), plus for cosine.
        for nu in 0..=9u32 {
            for b in [q(1, 2), q(1, 1), q(2, 1)] {
                let y = ratio_f64(&b).powi(2);
                let l = crate::specfun::laguerre_f64(nu, 0, 2.0 * y);
                let sgn = if nu % 2 == 0 { -1.0 } else { 1.0 };
                let int = PI.sqrt() / 4.0
                    * 2f64.powi(nu as i32)
                    * factorial(u64::from(nu)).to_f64().unwrap()
                    * (1.0 + sgn * (-y).exp() * l);
                let n2 = TrialFamily::f2(nu, b.clone()).unwrap().norm_sq().unwrap().value();
                assert!((n2 * int - 1.0).abs() < 1e-11, "nu={nu} b={b}: {}", n2 * int);
            }
        }
    }

    #[test]
    fn trial_functions_are_normalized() {
        let fams = vec![
            TrialFamily::f1(0),
            TrialFamily::f1(3),
            TrialFamily::f3(2, q(1, 2)).unwrap(),
            TrialFamily::f4(1, q(3, 1)).unwrap(),
        ];
        for fam in fams {
            let t = TrialFunction::new(fam.clone()).unwrap();
            let hi = match &fam {
                TrialFamily::F3 { a, .. } | TrialFamily::F4 { a, .. } => ratio_f64(a),
                _ => 12.0,
            };
            let opts = QuadOptions::absolute(1e-12);
            let n = t.norm_sq.value();
            let r = integrate_with(&0.0, &hi, &opts, |x: &f64| {
                let v = fam.eval_raw(x, None);
                n * v * v
            })
            .unwrap();
            assert!((r.value - 1.0).abs() < 1e-10, "{fam}: {}", r.value);
        }
    }

    #[test]
    fn well_recurrence_matches_sine() {
        let vals = well_all(&2.0f64, 30, &0.7);
        for (i, v) in vals.iter().enumerate() {
            let n = (i + 1) as f64;
            assert!((v - (n * PI * 0.7 / 2.0).sin()).abs() < 1e-13);
        }
    }
}
