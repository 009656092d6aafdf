//! Numeric traits shared by the exact, double, double-double and software-float paths.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::compensated::Dd;
use crate::hp::Hp;

/// A commutative ring element that can absorb rational constants.
///
/// Constants are created "like" an existing value so software floats inherit
/// the precision of their operands.
pub trait Scalar:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    #[allow(clippy::wrong_self_convention)]
    fn from_ratio_like(&self, q: &BigRational) -> Self;

    #[allow(clippy::wrong_self_convention)]
    fn from_int_like(&self, v: i64) -> Self {
        self.from_ratio_like(&BigRational::from_integer(BigInt::from(v)))
    }

    fn div_int(&self, d: i64) -> Self;
}

/// Real numbers with the elementary functions needed by the quadrature and
/// special-function code.
pub trait Real: Scalar + Div<Output = Self> + PartialOrd + Debug {
    fn lift(&self, v: f64) -> Self;
    fn pi_like(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self;
    fn powi(&self, n: i32) -> Self;
    fn to_f64(&self) -> f64;
    /// 2^-(mantissa bits).
    fn unit_roundoff(&self) -> f64;
    fn is_finite(&self) -> bool;
}

impl Scalar for BigRational {
    fn from_ratio_like(&self, q: &BigRational) -> Self {
        q.clone()
    }

    fn div_int(&self, d: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(d))
    }
}

impl Scalar for f64 {
    fn from_ratio_like(&self, q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }

    fn from_int_like(&self, v: i64) -> Self {
        v as f64
    }

    fn div_int(&self, d: i64) -> Self {
        self / d as f64
    }
}

impl Scalar for Dd {
    fn from_ratio_like(&self, q: &BigRational) -> Self {
        let hi = q.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() || q.is_zero() {
            return Dd::from(hi);
        }
        let rest = q - BigRational::from_float(hi).expect("finite");
        Dd::new(hi, rest.to_f64().unwrap_or(0.0))
    }

    fn from_int_like(&self, v: i64) -> Self {
        let hi = v as f64;
        Dd::new(hi, (v - hi as i64) as f64)
    }

    fn div_int(&self, d: i64) -> Self {
        *self / self.from_int_like(d)
    }
}

impl Scalar for Hp {
    fn from_ratio_like(&self, q: &BigRational) -> Self {
        Hp::from_rational(q, self.precision())
    }

    fn from_int_like(&self, v: i64) -> Self {
        Hp::from_i64(v, self.precision())
    }

    fn div_int(&self, d: i64) -> Self {
        self.div_i64(d)
    }
}

impl Real for f64 {
    fn lift(&self, v: f64) -> Self {
        v
    }
    fn pi_like(&self) -> Self {
        std::f64::consts::PI
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn unit_roundoff(&self) -> f64 {
        f64::EPSILON / 2.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Real for Hp {
    fn lift(&self, v: f64) -> Self {
        Hp::from_f64(v, self.precision())
    }
    fn pi_like(&self) -> Self {
        Hp::pi(self.precision())
    }
    fn exp(&self) -> Self {
        Hp::exp(self)
    }
    fn ln(&self) -> Self {
        Hp::ln(self)
    }
    fn sin(&self) -> Self {
        Hp::sin(self)
    }
    fn cos(&self) -> Self {
        Hp::cos(self)
    }
    fn sqrt(&self) -> Self {
        Hp::sqrt(self)
    }
    fn abs(&self) -> Self {
        Hp::abs(self)
    }
    fn powi(&self, n: i32) -> Self {
        Hp::powi(self, n)
    }
    fn to_f64(&self) -> f64 {
        Hp::to_f64(self)
    }
    fn unit_roundoff(&self) -> f64 {
        crate::hp::ldexp(1.0, -(self.precision() as i64))
    }
    fn is_finite(&self) -> bool {
        Hp::is_finite(self)
    }
}
