use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Error, Result};
use crate::hp::Hp;

/// A rational number times √π^s.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    value: BigRational,
    sqrt_pi_power: i32,
}

impl ExactScalar {
    pub fn new(num: BigInt, den: BigInt, sqrt_pi_power: i32) -> Result<Self> {
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        Ok(Self::with_sqrt_pi(BigRational::new(num, den), sqrt_pi_power))
    }

    pub fn with_sqrt_pi(value: BigRational, sqrt_pi_power: i32) -> Self {
        ExactScalar { value, sqrt_pi_power }
    }

    pub fn from_rational(value: BigRational) -> Self {
        Self::with_sqrt_pi(value, 0)
    }

    pub fn from_integer(v: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Self::from_rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn rational(&self) -> &BigRational {
        &self.value
    }

    pub fn sqrt_pi_power(&self) -> i32 {
        self.sqrt_pi_power
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn abs(&self) -> Self {
        Self::with_sqrt_pi(self.value.abs(), self.sqrt_pi_power)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.sqrt_pi_power != other.sqrt_pi_power {
            return Err(Error::MixedSqrtPiPower(self.sqrt_pi_power, other.sqrt_pi_power));
        }
        Ok(Self::with_sqrt_pi(&self.value + &other.value, self.sqrt_pi_power))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(invalid("division by zero"));
        }
        Ok(self.clone() / other.clone())
    }

    pub fn recip(&self) -> Result<Self> {
        Self::one().checked_div(self)
    }

    pub fn pow(&self, n: i32) -> Self {
        let value = if n >= 0 {
            num_traits::pow(self.value.clone(), n as usize)
        } else {
            num_traits::pow(self.value.recip(), n.unsigned_abs() as usize)
        };
        Self::with_sqrt_pi(value, self.sqrt_pi_power * n)
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        Self::with_sqrt_pi(&self.value * q, self.sqrt_pi_power)
    }

    pub fn to_hp(&self, bits: usize) -> Hp {
        let mut v = Hp::from_rational(&self.value, bits + 64);
        let s = self.sqrt_pi_power;
        if s != 0 {
            let sqrt_pi = Hp::pi(bits + 64).sqrt();
            v = v * sqrt_pi.powi(s);
        }
        v.with_precision(bits)
    }

    pub fn to_f64(&self) -> f64 {
        if self.sqrt_pi_power == 0 {
            num_traits::ToPrimitive::to_f64(&self.value).unwrap_or(f64::NAN)
        } else {
            self.to_hp(128).to_f64()
        }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: ExactScalar) -> ExactScalar {
        ExactScalar::with_sqrt_pi(self.value * o.value, self.sqrt_pi_power + o.sqrt_pi_power)
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::with_sqrt_pi(&self.value * &o.value, self.sqrt_pi_power + o.sqrt_pi_power)
    }
}

/// Panics on division by zero, like `BigRational`; see [`ExactScalar::checked_div`].
impl Div for ExactScalar {
    type Output = ExactScalar;
    fn div(self, o: ExactScalar) -> ExactScalar {
        ExactScalar::with_sqrt_pi(self.value / o.value, self.sqrt_pi_power - o.sqrt_pi_power)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::with_sqrt_pi(-self.value, self.sqrt_pi_power)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.value.numer(), self.value.denom())?;
        if self.sqrt_pi_power != 0 {
            write!(f, " * sqrtpi^{}", self.sqrt_pi_power)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_addition_is_an_error() {
        let a = ExactScalar::with_sqrt_pi(BigRational::one(), 1);
        let b = ExactScalar::one();
        assert_eq!(a.checked_add(&b), Err(Error::MixedSqrtPiPower(1, 0)));
    }

    #[test]
    fn stays_reduced() {
        let a = ExactScalar::new(6.into(), (-4).into(), 0).unwrap();
        assert_eq!(a.numer(), &BigInt::from(-3));
        assert_eq!(a.denom(), &BigInt::from(2));
        assert!(ExactScalar::new(1.into(), 0.into(), 0).is_err());
    }

    #[test]
    fn powers_track_sqrt_pi() {
        let g = ExactScalar::with_sqrt_pi(BigRational::new(1.into(), 2.into()), 1);
        let sq = g.pow(2);
        assert_eq!(sq.sqrt_pi_power(), 2);
        assert_eq!(sq.rational(), &BigRational::new(1.into(), 4.into()));
        assert!((sq.to_f64() - std::f64::consts::PI / 4.0).abs() < 1e-15);
        assert_eq!(g.pow(-1).sqrt_pi_power(), -1);
    }
}
