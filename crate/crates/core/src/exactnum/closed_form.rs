use std::fmt;
use std::ops::{Div, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::ExactScalar;
use crate::error::{invalid, Result};
use crate::hp::Hp;
use crate::real::Real;

/// `coeff · π^pi_power · 3^(sqrt3_power/2)` in canonical form.
///
/// Canonical means `sqrt3_power ∈ {0, −1}` (whole powers of 3 live in the
/// coefficient) and the coefficient carries `√π^0` or `√π^1` (pairs of √π
/// live in `pi_power`). Zero is stored with all exponents zero, so equal
/// values compare equal structurally.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedFormConstant {
    coeff: ExactScalar,
    pi_power: i32,
    sqrt3_power: i32,
}

fn pow3(k: i32) -> BigRational {
    let p = num_traits::pow(BigInt::from(3), k.unsigned_abs() as usize);
    if k >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

impl ClosedFormConstant {
    pub fn new(coeff: ExactScalar, pi_power: i32, sqrt3_power: i32) -> Self {
        if coeff.is_zero() {
            return ClosedFormConstant { coeff: ExactScalar::zero(), pi_power: 0, sqrt3_power: 0 };
        }
        let s = coeff.sqrt_pi_power();
        let pi_power = pi_power + s.div_euclid(2);
        let s = s.rem_euclid(2);
        // sqrt3^q = 3^k · sqrt3^(q − 2k) with q − 2k ∈ {0, −1}
        let k = (sqrt3_power + 1).div_euclid(2);
        let sqrt3_power = sqrt3_power - 2 * k;
        let value = coeff.rational() * pow3(k);
        ClosedFormConstant { coeff: ExactScalar::with_sqrt_pi(value, s), pi_power, sqrt3_power }
    }

    pub fn rational(q: BigRational) -> Self {
        Self::new(ExactScalar::from_rational(q), 0, 0)
    }

    pub fn coeff(&self) -> &ExactScalar {
        &self.coeff
    }

    pub fn pi_power(&self) -> i32 {
        self.pi_power
    }

    pub fn sqrt3_power(&self) -> i32 {
        self.sqrt3_power
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn recip(&self) -> Result<Self> {
        Ok(Self::new(self.coeff.recip()?, -self.pi_power, -self.sqrt3_power))
    }

    pub fn pow(&self, n: i32) -> Self {
        Self::new(self.coeff.pow(n), self.pi_power * n, self.sqrt3_power * n)
    }

    /// Value with `bits` of mantissa.
    pub fn to_hp(&self, bits: usize) -> Hp {
        let wp = bits + 64;
        let mut v = self.coeff.to_hp(wp);
        if self.pi_power != 0 {
            v = v * Hp::pi(wp).powi(self.pi_power);
        }
        if self.sqrt3_power != 0 {
            v = v * Hp::sqrt3(wp).powi(self.sqrt3_power);
        }
        v.with_precision(bits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_hp(128).to_f64()
    }

    /// The value in any real type, at that type's precision.
    pub fn to_real<R: Real>(&self, proto: &R) -> R {
        let mut v = proto.from_ratio_like(self.coeff.rational());
        let pi = proto.pi_like();
        if self.coeff.sqrt_pi_power() != 0 {
            v = v * pi.sqrt().powi(self.coeff.sqrt_pi_power());
        }
        if self.pi_power != 0 {
            v = v * pi.powi(self.pi_power);
        }
        if self.sqrt3_power != 0 {
            v = v * proto.lift(3.0).sqrt().powi(self.sqrt3_power);
        }
        v
    }
}

impl Mul for ClosedFormConstant {
    type Output = ClosedFormConstant;
    fn mul(self, o: ClosedFormConstant) -> ClosedFormConstant {
        ClosedFormConstant::new(
            self.coeff * o.coeff,
            self.pi_power + o.pi_power,
            self.sqrt3_power + o.sqrt3_power,
        )
    }
}

/// Panics on division by zero; see [`ClosedFormConstant::recip`].
impl Div for ClosedFormConstant {
    type Output = ClosedFormConstant;
    fn div(self, o: ClosedFormConstant) -> ClosedFormConstant {
        ClosedFormConstant::new(
            self.coeff / o.coeff,
            self.pi_power - o.pi_power,
            self.sqrt3_power - o.sqrt3_power,
        )
    }
}

impl From<ExactScalar> for ClosedFormConstant {
    fn from(coeff: ExactScalar) -> Self {
        ClosedFormConstant::new(coeff, 0, 0)
    }
}

/// Renders in the data-file grammar: `num/den * pi^p * sqrt3^q`, with
/// `* sqrtpi^1` appended when the coefficient carries √π.
impl fmt::Display for ClosedFormConstant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.coeff.rational();
        write!(f, "{}/{} * pi^{} * sqrt3^{}", r.numer(), r.denom(), self.pi_power, self.sqrt3_power)?;
        if self.coeff.sqrt_pi_power() != 0 {
            write!(f, " * sqrtpi^{}", self.coeff.sqrt_pi_power())?;
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        BigInt::from_str(t.trim()).map_err(|_| invalid(format!("bad integer `{t}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let d = parse_int(d)?;
            if d.is_zero() {
                return Err(invalid("zero denominator"));
            }
            Ok(BigRational::new(parse_int(n)?, d))
        }
        None => Ok(BigRational::from_integer(parse_int(s)?)),
    }
}

/// Parses `rational ( * pi^int | * sqrt3^int | * sqrtpi^int )*`.
impl FromStr for ClosedFormConstant {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split('*');
        let coeff = parse_rational(parts.next().unwrap_or(""))?;
        let (mut p, mut q, mut sp) = (0i32, 0i32, 0i32);
        for factor in parts {
            let (base, exp) = factor
                .trim()
                .split_once('^')
                .ok_or_else(|| invalid(format!("expected base^exp, got `{}`", factor.trim())))?;
            let exp: i32 =
                exp.trim().parse().map_err(|_| invalid(format!("bad exponent `{exp}`")))?;
            match base.trim() {
                "pi" => p += exp,
                "sqrt3" => q += exp,
                "sqrtpi" => sp += exp,
                other => return Err(invalid(format!("unknown factor `{other}`"))),
            }
        }
        Ok(ClosedFormConstant::new(ExactScalar::with_sqrt_pi(coeff, sp), p, q))
    }
}
