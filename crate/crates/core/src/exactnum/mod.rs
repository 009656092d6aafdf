//! Exact arithmetic: rationals scaled by powers of √π, half-integer gamma
//! values, and the two structured closed-form types used for table values.

mod closed_form;
mod exp_poly;
mod gamma;
mod scalar;

use std::fmt;

use num_rational::BigRational;

pub use closed_form::ClosedFormConstant;
pub use exp_poly::{laurent_from_pairs, ExpPolyForm, Laurent};
pub use gamma::{
    binomial, double_factorial, factorial, gamma_half, gamma_half_signed, generalized_binomial,
};
pub use scalar::ExactScalar;

use crate::error::{invalid, Result};
use crate::hp::{bits_for_digits, Hp};

/// A structured exact value: either shape of right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedValue {
    Constant(ClosedFormConstant),
    ExpPoly(ExpPolyForm),
}

impl fmt::Display for ClosedValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClosedValue::Constant(c) => c.fmt(f),
            ClosedValue::ExpPoly(e) => e.fmt(f),
        }
    }
}

/// Minimum precision accepted by [`render`], in decimal digits.
pub const MIN_RENDER_DIGITS: u32 = 16;

/// High-precision value of a structured constant, good to `digits` decimal digits.
///
/// `y` (= b²) is required for [`ClosedValue::ExpPoly`] and ignored otherwise.
/// At y = 0 the exp-poly form is evaluated through its exact finite limit.
pub fn render(value: &ClosedValue, y: Option<&BigRational>, digits: u32) -> Result<Hp> {
    if digits < MIN_RENDER_DIGITS {
        return Err(invalid(format!("precision {digits} below {MIN_RENDER_DIGITS} digits")));
    }
    let bits = bits_for_digits(digits);
    match value {
        ClosedValue::Constant(c) => Ok(c.to_hp(bits)),
        ClosedValue::ExpPoly(e) => {
            let y = y.ok_or_else(|| invalid("exp-poly value needs y = b^2"))?;
            e.eval_hp(y, bits)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_rejects_low_precision() {
        let c = ClosedValue::Constant("2/3 * pi^1 * sqrt3^-1".parse().unwrap());
        assert!(render(&c, None, 15).is_err());
        let v = render(&c, None, 40).unwrap();
        assert_eq!(v.to_sci_string(12), "1.20919957616e0");
    }

    #[test]
    fn exp_poly_needs_y() {
        let e = ClosedValue::ExpPoly("1 * exp(-y/2) * ([-1:-1] | [-1:1])".parse().unwrap());
        assert!(render(&e, None, 20).is_err());
        assert_eq!(render(&e, Some(&BigRational::from_integer(0.into())), 20).unwrap().to_f64(), 1.0);
    }
}
