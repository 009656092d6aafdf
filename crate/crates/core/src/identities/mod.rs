//! Registry of the tabulated series identities and their verification.
//!
//! Each identity is Σ T_n = RHS for one family and ν. The left side is
//! summed by the series engine; the right side is the stored table value and,
//! for F1, F3 and F4, an independently assembled closed form.

pub mod appendix;
mod data;
mod terms;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::coeffs::f1_scale;
use crate::error::{invalid, Error, Result};
use crate::exactnum::{gamma_half, render, ClosedFormConstant, ClosedValue, ExactScalar};
use crate::qmodels::{Family, TrialFamily};
use crate::series_engine::{sum_series, StopRule, SumMode, SumPolicy, SumReport, TailModel};

pub use appendix::{appendix_check, appendix_suite, CheckId, CheckReport};
pub use data::{parse_registry, registry, Registry};
pub use terms::{CoeffSquares, TableTerms};

/// Default rendering precision for right-hand sides, in decimal digits.
pub const DEFAULT_DIGITS: u32 = 34;

/// One identity: a table row or the ν = 0 F1 sum.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentitySpec {
    pub family: Family,
    pub nu: u32,
    /// Required for F2.
    pub b: Option<BigRational>,
    /// Well width used when assembling the derived right-hand side (F3, F4).
    pub a: BigRational,
    pub rhs_paper: ClosedValue,
    pub rhs_derived: Option<ClosedFormConstant>,
}

impl IdentitySpec {
    pub fn new(family: Family, nu: u32, b: Option<BigRational>) -> Result<Self> {
        Self::with_width(family, nu, b, BigRational::one())
    }

    pub fn with_width(family: Family, nu: u32, b: Option<BigRational>, a: BigRational) -> Result<Self> {
        if family == Family::F2 {
            match &b {
                Some(b) if b > &BigRational::from_integer(0.into()) => {}
                _ => return Err(invalid("F2 needs b > 0")),
            }
        }
        let rhs_paper = rhs_paper(family, nu)?;
        let rhs_derived = match family {
            Family::F2 => None,
            _ => Some(derive_rhs_at(family, nu, &a)?),
        };
        Ok(IdentitySpec { family, nu, b, a, rhs_paper, rhs_derived })
    }

    /// y = b² for F2.
    pub fn y(&self) -> Option<BigRational> {
        self.b.as_ref().map(|b| b * b)
    }

    pub fn terms(&self) -> Result<TableTerms> {
        TableTerms::new(self.family, self.nu, self.b.as_ref())
    }

    /// Structural equality of the derived and stored right-hand sides.
    pub fn derived_matches(&self) -> Option<bool> {
        self.rhs_derived.as_ref().map(|d| match &self.rhs_paper {
            ClosedValue::Constant(c) => c == d,
            ClosedValue::ExpPoly(_) => false,
        })
    }
}

impl fmt::Display for IdentitySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} nu={}", self.family, self.nu)?;
        if let Some(b) = &self.b {
            write!(f, " b={b}")?;
        }
        Ok(())
    }
}

/// The stored table value.
pub fn rhs_paper(family: Family, nu: u32) -> Result<ClosedValue> {
    registry()
        .get(&(family, nu))
        .cloned()
        .ok_or_else(|| Error::NoTabulatedValue { family: family.to_string(), nu })
}

/// Closed form from Σ|C_n|² = 1 and the closed-form coefficients, at a = 1.
pub fn derive_rhs(family: Family, nu: u32) -> Result<ClosedFormConstant> {
    derive_rhs_at(family, nu, &BigRational::one())
}

/// As [`derive_rhs`] with well width `a`; the result does not depend on a.
pub fn derive_rhs_at(family: Family, nu: u32, a: &BigRational) -> Result<ClosedFormConstant> {
    match family {
        Family::F1 => f1_scale(nu)?.recip(),
        Family::F2 => Err(invalid("no derived right-hand side for F2")),
        Family::F3 | Family::F4 => {
            let fam = if family == Family::F3 {
                TrialFamily::f3(nu, a.clone())?
            } else {
                TrialFamily::f4(nu, a.clone())?
            };
            let norm = fam.exact_norm_sq()?.expect("well norms are exact");
            let g = gamma_half(2 * nu + 1)?;
            let g2 = g.clone() * g;
            // F3: (aπ/2)(2a²/π)^{2ν}Γ(ν+1/2)²; F4: (π/(2a))(2a²/π)^{2ν}Γ(ν+1/2)²
            let two_a2 = BigRational::from_integer(BigInt::from(2)) * a * a;
            let lead = if family == Family::F3 {
                a / BigRational::from_integer(2.into())
            } else {
                BigRational::one() / (BigRational::from_integer(2.into()) * a)
            };
            let r = lead * num_traits::pow(two_a2, 2 * nu as usize);
            let k = norm * ClosedFormConstant::new(ExactScalar::from_rational(r) * g2, 1 - 2 * nu as i32, 0);
            k.recip()
        }
    }
}

/// Rows of tables 1–4: the family and its ν range.
pub fn table_rows(id: u8) -> Result<(Family, Vec<u32>)> {
    match id {
        1 => Ok((Family::F1, (1..=10).collect())),
        2 => Ok((Family::F3, (1..=10).collect())),
        3 => Ok((Family::F4, (1..=10).collect())),
        4 => Ok((Family::F2, (0..=9).collect())),
        _ => Err(invalid(format!("unknown table {id}; expected 1..4"))),
    }
}

/// Default tolerance on the relative error of the summed series.
pub fn default_tolerance(family: Family) -> f64 {
    match family {
        Family::F1 => 1e-12,
        Family::F2 => 1e-9,
        Family::F3 | Family::F4 => 1e-6,
    }
}

/// Exact mode where terms are exact (F1, F2), float otherwise.
pub fn default_mode(family: Family) -> SumMode {
    match family {
        Family::F1 | Family::F2 => SumMode::ExactRational,
        Family::F3 | Family::F4 => SumMode::FloatCompensated,
    }
}

pub const F3_TERMS: u64 = 10_000;
pub const F4_TERMS: u64 = 100_000;

/// Per-family summation policy.
///
/// F1 with even ν decays like n^{−ν−3/2}, so it is summed to a fixed N and
/// extrapolated by a power-law fit; odd ν and F2 decay geometrically.
pub fn default_policy(family: Family, nu: u32, mode: SumMode) -> SumPolicy {
    let rel_tol = match mode {
        SumMode::ExactRational => 1e-16,
        SumMode::FloatCompensated => 1e-14,
    };
    let geometric = StopRule::Geometric { k: 8, rel_tol };
    let stop = match family {
        Family::F1 if nu.is_multiple_of(2) => {
            let (n, order) = match mode {
                SumMode::ExactRational => (200, 10),
                SumMode::FloatCompensated => (2000, 4),
            };
            StopRule::FixedPlusTail { n, tail: TailModel::PowerLaw { two_alpha: 2 * nu + 1, order } }
        }
        Family::F1 | Family::F2 => geometric,
        Family::F3 => StopRule::FixedPlusTail { n: F3_TERMS, tail: TailModel::F3 { nu } },
        Family::F4 => StopRule::FixedPlusTail { n: F4_TERMS, tail: TailModel::F4 { nu } },
    };
    let max_terms = match stop {
        StopRule::FixedPlusTail { n, .. } => n.max(2000),
        StopRule::Geometric { .. } => 2000,
    };
    SumPolicy { mode, stop, max_terms }
}

/// Outcome of a single identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub spec: IdentitySpec,
    pub report: SumReport,
    pub tolerance: f64,
    pub rhs_exact: String,
    pub rhs_float: f64,
    pub derived_float: Option<f64>,
    /// Structural equality of derived and stored constants.
    pub derived_matches: Option<bool>,
    pub pass: bool,
}

impl Verification {
    pub fn non_converged(&self) -> bool {
        self.report.budget_exhausted || !self.report.stop_fired
    }
}

/// High-precision value of the stored right-hand side of `spec`.
pub fn rhs_value(spec: &IdentitySpec, digits: u32) -> Result<f64> {
    Ok(render(&spec.rhs_paper, spec.y().as_ref(), digits)?.to_f64())
}

/// Sums the row with its default policy and checks all three sides agree.
pub fn verify_identity(spec: &IdentitySpec, tol: f64) -> Result<Verification> {
    let policy = default_policy(spec.family, spec.nu, default_mode(spec.family));
    verify_with(spec, &policy, tol, DEFAULT_DIGITS)
}

pub fn verify_with(spec: &IdentitySpec, policy: &SumPolicy, tol: f64, digits: u32) -> Result<Verification> {
    if !(tol > 0.0) {
        return Err(invalid("tolerance must be positive"));
    }
    let terms = spec.terms()?;
    let rhs_float = rhs_value(spec, digits)?;
    let report = sum_series(&terms, policy)?.with_rhs(rhs_float, tol);
    let derived_float = spec.rhs_derived.as_ref().map(|d| d.to_hp(crate::hp::bits_for_digits(digits)).to_f64());
    let derived_matches = spec.derived_matches();
    let derived_close = derived_float
        .map(|d| (report.total - d).abs() <= tol * d.abs())
        .unwrap_or(true);
    let pass = report.converged && derived_matches != Some(false) && derived_close;
    Ok(Verification {
        rhs_exact: spec.rhs_paper.to_string(),
        spec: spec.clone(),
        report,
        tolerance: tol,
        rhs_float,
        derived_float,
        derived_matches,
        pass,
    })
}

/// Σ|C_n|² for a normalized trial function, compared with 1.
pub fn normalization_sum(family: &TrialFamily, tol: f64) -> Result<SumReport> {
    let src = CoeffSquares::new(family.clone())?;
    let policy = default_policy(family.family(), family.nu(), SumMode::FloatCompensated);
    Ok(sum_series(&src, &policy)?.with_rhs(1.0, tol))
}

/// Floating value of a rational, for reporting.
pub fn ratio_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> BigRational {
        BigRational::new(1.into(), 2.into())
    }

    #[test]
    fn tabulated_values() {
        let c = |f, nu| match rhs_paper(f, nu).unwrap() {
            ClosedValue::Constant(c) => c,
            _ => panic!(),
        };
        assert_eq!(c(Family::F1, 0), "1/2 * pi^2 * sqrt3^-1".parse().unwrap());
        assert_eq!(c(Family::F3, 2), "32/2835 * pi^2".parse().unwrap());
        assert_eq!(c(Family::F4, 1), "4/3".parse().unwrap());
        assert!(matches!(rhs_paper(Family::F3, 11), Err(Error::NoTabulatedValue { .. })));
    }

    #[test]
    fn derived_examples() {
        assert_eq!(derive_rhs(Family::F1, 1).unwrap(), "2/3 * pi^1 * sqrt3^-1".parse().unwrap());
        assert_eq!(derive_rhs(Family::F1, 0).unwrap(), "1/2 * pi^2 * sqrt3^-1".parse().unwrap());
        assert_eq!(derive_rhs(Family::F3, 1).unwrap(), "4/15".parse().unwrap());
        assert!(derive_rhs(Family::F2, 1).is_err());
    }

    #[test]
    fn derived_is_width_independent() {
        for a in [half(), BigRational::from_integer(3.into()), BigRational::new(7.into(), 5.into())] {
            for nu in 1..=4 {
                for f in [Family::F3, Family::F4] {
                    assert_eq!(derive_rhs_at(f, nu, &a).unwrap(), derive_rhs(f, nu).unwrap());
                }
            }
        }
    }

    #[test]
    fn f1_odd_exact_stream() {
        let spec = IdentitySpec::new(Family::F1, 1, None).unwrap();
        let policy = SumPolicy { mode: SumMode::ExactRational, stop: StopRule::FixedPlusTail { n: 40, tail: TailModel::None }, max_terms: 40 };
        let v = verify_with(&spec, &policy, 1e-15, 40).unwrap();
        let partial = v.report.exact_partial.clone().unwrap();
        assert_eq!(partial.sqrt_pi_power(), 2);
        let want = crate::hp::Hp::from_f64(2.0, 256) * crate::hp::Hp::pi(256) / (crate::hp::Hp::sqrt3(256).mul_i64(3));
        let got = partial.to_hp(256);
        assert!((got - want).abs().to_f64() < 1e-20);
    }

    #[test]
    fn verify_examples() {
        let v = verify_identity(&IdentitySpec::new(Family::F1, 10, None).unwrap(), 1e-12).unwrap();
        assert!(v.pass, "{v:?}");
        let v = verify_identity(&IdentitySpec::new(Family::F1, 0, None).unwrap(), 1e-12).unwrap();
        assert!(v.pass, "{v:?}");
        let b = Some(BigRational::one());
        let v = verify_identity(&IdentitySpec::new(Family::F2, 1, b).unwrap(), 1e-10).unwrap();
        let e = std::f64::consts::E;
        assert!((v.report.total - (e - 1.0) / 2.0 * (-0.5f64).exp()).abs() < 1e-10);
        assert!(v.pass);
        let v = verify_identity(&IdentitySpec::new(Family::F2, 0, Some(BigRational::one())).unwrap(), 1e-12).unwrap();
        assert!((v.report.total - 2.0 * 0.5f64.sinh()).abs() < 1e-12);
    }

    #[test]
    fn f2_needs_b() {
        assert!(IdentitySpec::new(Family::F2, 1, None).is_err());
        assert!(IdentitySpec::new(Family::F2, 1, Some(BigRational::from_integer(0.into()))).is_err());
    }

    #[test]
    fn tables() {
        assert_eq!(table_rows(4).unwrap().1, (0..=9).collect::<Vec<_>>());
        assert!(table_rows(9).is_err());
    }
}
