use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::closed_form::parse_rational;
use super::gamma::factorial;
use super::ExactScalar;
use crate::error::{invalid, Error, Result};
use crate::hp::Hp;

/// Laurent polynomial: exponent → rational coefficient (zero coefficients never stored).
pub type Laurent = BTreeMap<i32, BigRational>;

/// `scale · e^(−y/2) · (A(y) + B(y)·e^y)` with Laurent polynomials A and B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpPolyForm {
    scale: ExactScalar,
    a_poly: Laurent,
    b_poly: Laurent,
}

fn strip_zeros(p: Laurent) -> Laurent {
    p.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

impl ExpPolyForm {
    pub fn new(scale: ExactScalar, a_poly: Laurent, b_poly: Laurent) -> Result<Self> {
        let a_poly = strip_zeros(a_poly);
        let b_poly = strip_zeros(b_poly);
        if a_poly.is_empty() && b_poly.is_empty() {
            return Err(invalid("both Laurent polynomials are empty"));
        }
        Ok(ExpPolyForm { scale, a_poly, b_poly })
    }

    pub fn scale(&self) -> &ExactScalar {
        &self.scale
    }

    pub fn a_poly(&self) -> &Laurent {
        &self.a_poly
    }

    pub fn b_poly(&self) -> &Laurent {
        &self.b_poly
    }

    fn min_exponent(&self) -> i32 {
        let a = self.a_poly.keys().next().copied().unwrap_or(0);
        let b = self.b_poly.keys().next().copied().unwrap_or(0);
        a.min(b).min(0)
    }

    /// Exact limit y → 0⁺.
    ///
    /// Expands `A + B e^y` as a Laurent series; the negative-power part must
    /// cancel, otherwise the limit is infinite.
    pub fn limit_at_zero(&self) -> Result<ExactScalar> {
        let m = self.min_exponent();
        // c_j for j in m..=0, coefficient of y^j in A + B e^y
        let mut c: BTreeMap<i32, BigRational> = BTreeMap::new();
        for j in m..=0 {
            let mut s = self.a_poly.get(&j).cloned().unwrap_or_else(BigRational::zero);
            for (&i, bi) in self.b_poly.range(..=j) {
                let k = (j - i) as u64;
                s += bi / BigRational::from_integer(factorial(k));
            }
            c.insert(j, s);
        }
        if c.range(..0).any(|(_, v)| !v.is_zero()) {
            return Err(Error::DivergentLimit);
        }
        // y^0 coefficient of e^(−y/2) · Σ c_j y^j
        let mut total = BigRational::zero();
        for (&j, cj) in &c {
            let k = (-j) as u64;
            let e_k = num_traits::pow(BigRational::new((-1).into(), 2.into()), k as usize)
                / BigRational::from_integer(factorial(k));
            total += cj * e_k;
        }
        Ok(self.scale.mul_rational(&total))
    }

    /// Value at y, correctly rounded to about `bits` of mantissa.
    ///
    /// Cancellation between A and B e^y is measured and the working
    /// precision raised until enough bits survive.
    pub fn eval_hp(&self, y: &BigRational, bits: usize) -> Result<Hp> {
        if y.is_negative() {
            return Err(invalid("ExpPolyForm needs y >= 0"));
        }
        if y.is_zero() {
            return Ok(self.limit_at_zero()?.to_hp(bits));
        }
        let mut wp = bits + 64;
        loop {
            let yh = Hp::from_rational(y, wp);
            let ey = yh.exp();
            let (a, a_mag) = eval_laurent(&self.a_poly, &yh, wp);
            let (b, b_mag) = eval_laurent(&self.b_poly, &yh, wp);
            let r = a + b * &ey;
            let mag = a_mag + b_mag * &ey;
            let lost = match (mag.exponent(), r.exponent()) {
                (Some(m), Some(e)) => (m - e).max(0) as usize,
                _ => wp,
            };
            if lost + bits + 32 <= wp {
                let v = self.scale.to_hp(wp) * r * (-yh.div_i64(2)).exp();
                return Ok(v.with_precision(bits));
            }
            if wp > 1 << 16 {
                return Err(invalid("cancellation too severe to render"));
            }
            wp = (bits + lost + 64).max(2 * wp);
        }
    }
}

fn eval_laurent(p: &Laurent, y: &Hp, wp: usize) -> (Hp, Hp) {
    let mut sum = Hp::zero(wp);
    let mut mag = Hp::zero(wp);
    for (&e, c) in p {
        let t = Hp::from_rational(c, wp) * y.powi(e);
        mag = mag + t.abs();
        sum = sum + t;
    }
    (sum, mag)
}

fn fmt_laurent(p: &Laurent) -> String {
    let items: Vec<String> = p
        .iter()
        .map(|(e, c)| {
            if c.denom().is_one() {
                format!("{e}:{}", c.numer())
            } else {
                format!("{e}:{}/{}", c.numer(), c.denom())
            }
        })
        .collect();
    format!("[{}]", items.join(", "))
}

fn parse_laurent(s: &str) -> Result<Laurent> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| invalid(format!("expected [exp:coeff, ...], got `{s}`")))?;
    let mut out = Laurent::new();
    for item in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (e, c) =
            item.split_once(':').ok_or_else(|| invalid(format!("expected exp:coeff, got `{item}`")))?;
        let e: i32 = e.trim().parse().map_err(|_| invalid(format!("bad exponent `{e}`")))?;
        let c = parse_rational(c)?;
        if out.insert(e, c).is_some() {
            return Err(invalid(format!("exponent {e} repeated")));
        }
    }
    Ok(out)
}

/// `num/den * exp(-y/2) * ([e:c, ...] | [e:c, ...])`; the left list is A, the right B.
impl fmt::Display for ExpPolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.scale.rational();
        if r.denom().is_one() {
            write!(f, "{}", r.numer())?;
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())?;
        }
        if self.scale.sqrt_pi_power() != 0 {
            write!(f, " * sqrtpi^{}", self.scale.sqrt_pi_power())?;
        }
        write!(f, " * exp(-y/2) * ({} | {})", fmt_laurent(&self.a_poly), fmt_laurent(&self.b_poly))
    }
}

impl FromStr for ExpPolyForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (head, tail) =
            s.split_once("exp(-y/2)").ok_or_else(|| invalid("missing `exp(-y/2)`"))?;
        let head = head.trim().strip_suffix('*').ok_or_else(|| invalid("missing `*` before exp"))?;
        let mut parts = head.split('*');
        let scale = parse_rational(parts.next().unwrap_or(""))?;
        let mut sp = 0;
        for factor in parts {
            let exp = factor
                .trim()
                .strip_prefix("sqrtpi^")
                .ok_or_else(|| invalid(format!("unexpected scale factor `{}`", factor.trim())))?;
            sp += exp.trim().parse::<i32>().map_err(|_| invalid("bad sqrtpi exponent"))?;
        }
        let body = tail
            .trim()
            .strip_prefix('*')
            .map(str::trim)
            .and_then(|t| t.strip_prefix('('))
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| invalid("expected `* (A | B)` after exp(-y/2)"))?;
        let (a, b) = body.split_once('|').ok_or_else(|| invalid("expected `A | B`"))?;
        ExpPolyForm::new(ExactScalar::with_sqrt_pi(scale, sp), parse_laurent(a)?, parse_laurent(b)?)
    }
}

/// Integer-coefficient helper used by tests and the data file checks.
pub fn laurent_from_pairs(pairs: &[(i32, i64)]) -> Laurent {
    pairs.iter().map(|&(e, c)| (e, BigRational::from_integer(BigInt::from(c)))).collect()
}
