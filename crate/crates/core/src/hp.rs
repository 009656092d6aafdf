//! Software floating-point numbers with a configurable mantissa.
//!
//! [`Hp`] wraps `astro_float::BigFloat` and carries its working precision, so
//! arithmetic between two values runs at the larger of the two precisions.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Exponent, Radix, RoundingMode, Sign};
use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;

/// Default mantissa width in bits.
pub const DEFAULT_PRECISION_BITS: usize = 256;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("allocating the constant cache"));
    static SQRT3: RefCell<HashMap<usize, BigFloat>> = RefCell::new(HashMap::new());
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

fn word_prec(p: usize) -> usize {
    p.max(64).div_ceil(64) * 64
}

/// Mantissa bits needed to hold `digits` significant decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    word_prec((digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 16)
}

/// `x * 2^e` without intermediate overflow or underflow.
pub(crate) fn ldexp(mut x: f64, mut e: i64) -> f64 {
    let big = 2f64.powi(960);
    let small = 2f64.powi(-960);
    while e > 960 {
        x *= big;
        e -= 960;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -960 {
        x *= small;
        e += 960;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

#[derive(Clone, Debug)]
pub struct Hp {
    v: BigFloat,
    p: usize,
}

impl Hp {
    fn wrap(v: BigFloat, p: usize) -> Hp {
        Hp { v, p }
    }

    pub fn zero(p: usize) -> Hp {
        let p = word_prec(p);
        Hp::wrap(BigFloat::from_u8(0, p), p)
    }

    pub fn one(p: usize) -> Hp {
        Hp::from_i64(1, p)
    }

    pub fn from_f64(x: f64, p: usize) -> Hp {
        let p = word_prec(p);
        Hp::wrap(BigFloat::from_f64(x, p), p)
    }

    pub fn from_i64(x: i64, p: usize) -> Hp {
        let p = word_prec(p);
        Hp::wrap(BigFloat::from_i64(x, p), p)
    }

    pub fn from_bigint(n: &BigInt, p: usize) -> Hp {
        let p = word_prec(p);
        let (sign, digits) = n.to_u64_digits();
        if digits.is_empty() {
            return Hp::zero(p);
        }
        let s = if sign == BigSign::Minus { Sign::Neg } else { Sign::Pos };
        let mut v = BigFloat::from_words(&digits, s, (64 * digits.len()) as Exponent);
        v.set_precision(p, RM).expect("setting precision");
        Hp::wrap(v, p)
    }

    pub fn from_rational(q: &BigRational, p: usize) -> Hp {
        let p = word_prec(p);
        let num = Hp::from_bigint(q.numer(), p + 64);
        let den = Hp::from_bigint(q.denom(), p + 64);
        Hp::wrap(num.v.div(&den.v, p, RM), p)
    }

    pub fn pi(p: usize) -> Hp {
        let p = word_prec(p);
        Hp::wrap(with_consts(|cc| cc.pi(p, RM)), p)
    }

    /// √3, computed once per precision level.
    pub fn sqrt3(p: usize) -> Hp {
        let p = word_prec(p);
        let v = SQRT3.with(|cache| {
            cache
                .borrow_mut()
                .entry(p)
                .or_insert_with(|| BigFloat::from_u8(3, p).sqrt(p, RM))
                .clone()
        });
        Hp::wrap(v, p)
    }

    pub fn precision(&self) -> usize {
        self.p
    }

    /// The same value rounded (or widened) to `p` bits.
    pub fn with_precision(&self, p: usize) -> Hp {
        let p = word_prec(p);
        let mut v = self.v.clone();
        v.set_precision(p, RM).expect("setting precision");
        Hp::wrap(v, p)
    }

    pub fn sqrt(&self) -> Hp {
        Hp::wrap(self.v.sqrt(self.p, RM), self.p)
    }

    pub fn exp(&self) -> Hp {
        Hp::wrap(with_consts(|cc| self.v.exp(self.p, RM, cc)), self.p)
    }

    pub fn ln(&self) -> Hp {
        Hp::wrap(with_consts(|cc| self.v.ln(self.p, RM, cc)), self.p)
    }

    pub fn sin(&self) -> Hp {
        Hp::wrap(with_consts(|cc| self.v.sin(self.p, RM, cc)), self.p)
    }

    pub fn cos(&self) -> Hp {
        Hp::wrap(with_consts(|cc| self.v.cos(self.p, RM, cc)), self.p)
    }

    pub fn abs(&self) -> Hp {
        Hp::wrap(self.v.abs(), self.p)
    }

    pub fn recip(&self) -> Hp {
        Hp::wrap(self.v.reciprocal(self.p, RM), self.p)
    }

    pub fn powi(&self, n: i32) -> Hp {
        let r = self.v.powi(n.unsigned_abs() as usize, self.p, RM);
        let r = Hp::wrap(r, self.p);
        if n < 0 {
            r.recip()
        } else {
            r
        }
    }

    pub fn mul_i64(&self, k: i64) -> Hp {
        Hp::wrap(self.v.mul(&BigFloat::from_i64(k, 64), self.p, RM), self.p)
    }

    pub fn div_i64(&self, k: i64) -> Hp {
        Hp::wrap(self.v.div(&BigFloat::from_i64(k, 64), self.p, RM), self.p)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    /// Binary exponent `e` with |x| in [2^(e-1), 2^e), or `None` for zero and non-finite values.
    pub fn exponent(&self) -> Option<i64> {
        if self.v.is_zero() || !self.is_finite() {
            None
        } else {
            self.v.exponent().map(i64::from)
        }
    }

    /// Nearest `f64` (ties resolved on the leading 128 bits).
    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.v.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        let Some((m, _, s, e, _)) = self.v.as_raw_parts() else {
            return f64::NAN;
        };
        if self.v.is_zero() || m.is_empty() {
            return 0.0;
        }
        let top = m[m.len() - 1] as u128;
        let next = if m.len() >= 2 { m[m.len() - 2] as u128 } else { 0 };
        let mant = (top << 64) | next;
        let x = ldexp(mant as f64, e as i64 - 128);
        if s == Sign::Neg {
            -x
        } else {
            x
        }
    }

    /// Scientific notation with `digits` significant decimal digits, e.g. `1.2091995761561452e0`.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.v.is_zero() {
            return format!("0.{}e0", "0".repeat(digits - 1));
        }
        let raw = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        let (neg, body) = match raw.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, raw.as_str()),
        };
        let Some((mant, exp)) = body.split_once('e') else {
            return raw;
        };
        let mut exp: i64 = exp.trim_start_matches('+').parse().unwrap_or(0);
        let int_len = mant.find('.').unwrap_or(mant.len()) as i64;
        let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        // Normalize to a leading non-zero digit.
        let lead = ds.iter().position(|&d| d != 0).unwrap_or(0);
        ds.drain(..lead);
        exp += int_len - 1 - lead as i64;
        if ds.len() > digits {
            let round_up = ds[digits] >= 5;
            ds.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.truncate(digits);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        }
        ds.resize(digits, 0);
        let text: String = ds.iter().map(|d| char::from(b'0' + d)).collect();
        let sign = if neg { "-" } else { "" };
        if digits == 1 {
            format!("{sign}{text}e{exp}")
        } else {
            format!("{sign}{}.{}e{exp}", &text[..1], &text[1..])
        }
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = (self.p as f64 / std::f64::consts::LOG2_10).floor() as usize;
        f.write_str(&self.to_sci_string(digits))
    }
}

impl PartialEq for Hp {
    fn eq(&self, other: &Hp) -> bool {
        self.v.cmp(&other.v) == Some(0)
    }
}

impl PartialOrd for Hp {
    fn partial_cmp(&self, other: &Hp) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! hp_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Hp> for &Hp {
            type Output = Hp;
            fn $method(self, o: &Hp) -> Hp {
                let p = self.p.max(o.p);
                Hp::wrap(self.v.$method(&o.v, p, RM), p)
            }
        }
        impl $tr<Hp> for Hp {
            type Output = Hp;
            fn $method(self, o: Hp) -> Hp {
                (&self).$method(&o)
            }
        }
        impl $tr<&Hp> for Hp {
            type Output = Hp;
            fn $method(self, o: &Hp) -> Hp {
                (&self).$method(o)
            }
        }
    };
}

hp_binop!(Add, add);
hp_binop!(Sub, sub);
hp_binop!(Mul, mul);
hp_binop!(Div, div);

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp::wrap(BigFloat::neg(&self.v), self.p)
    }
}

impl Neg for &Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp::wrap(BigFloat::neg(&self.v), self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Num;

    #[test]
    fn f64_round_trip() {
        for x in [1.0, -2.5, 1e-300, 3.0e300, std::f64::consts::PI, 2.2250738585072014e-308] {
            assert_eq!(Hp::from_f64(x, 128).to_f64(), x);
        }
        assert_eq!(Hp::zero(64).to_f64(), 0.0);
    }

    #[test]
    fn big_integers_convert_exactly() {
        let n = BigInt::from_str_radix("123456789012345678901234567890123", 10).unwrap();
        let h = Hp::from_bigint(&n, 256);
        assert_eq!(h.to_sci_string(33), "1.23456789012345678901234567890123e32");
        let neg = Hp::from_bigint(&-n, 256);
        assert!(neg.is_negative());
    }

    #[test]
    fn rational_and_constants() {
        let q = BigRational::new(1.into(), 3.into());
        let third = Hp::from_rational(&q, 256);
        let d = third.mul_i64(3) - Hp::one(256);
        assert!(d.is_zero() || d.exponent().unwrap() < -250);
        assert_eq!(Hp::pi(128).to_f64(), std::f64::consts::PI);
        assert_eq!(Hp::sqrt3(256).to_f64(), 3f64.sqrt());
        assert_eq!(Hp::pi(256).to_sci_string(20), "3.1415926535897932385e0");
    }

    #[test]
    fn rounding_carries_into_exponent() {
        let x = Hp::from_f64(9.9999, 128);
        assert_eq!(x.to_sci_string(3), "1.00e1");
        assert_eq!(Hp::from_f64(-0.00125, 128).to_sci_string(2), "-1.3e-3");
    }
}
