//! Term streams of the four families.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::coeffs::{f1_term_exact, f1_term_float, f2_raw_scale, f2_term_exact, f2_term_float, f3_term, f4_term, well_raw_overlap, well_scale};
use crate::error::Result;
use crate::exactnum::ExactScalar;
use crate::qmodels::{Family, TrialFamily};
use crate::series_engine::TermSource;

/// The summand stream of a table row.
#[derive(Clone, Debug, PartialEq)]
pub enum TableTerms {
    F1 { nu: u32 },
    F2 { nu: u32, y: BigRational, y_f64: f64 },
    F3 { nu: u32 },
    F4 { nu: u32 },
}

impl TableTerms {
    /// `b` is required for F2 and ignored otherwise.
    pub fn new(family: Family, nu: u32, b: Option<&BigRational>) -> Result<Self> {
        Ok(match family {
            Family::F1 => TableTerms::F1 { nu },
            Family::F2 => {
                let b = b.ok_or_else(|| crate::error::invalid("F2 needs b"))?;
                let y = b * b;
                let y_f64 = y.to_f64().unwrap_or(f64::NAN);
                TableTerms::F2 { nu, y, y_f64 }
            }
            Family::F3 => TableTerms::F3 { nu },
            Family::F4 => TableTerms::F4 { nu },
        })
    }
}

impl TermSource for TableTerms {
    fn label(&self) -> String {
        match self {
            TableTerms::F1 { nu } => format!("f1 nu={nu}"),
            TableTerms::F2 { nu, y, .. } => format!("f2 nu={nu} y={y}"),
            TableTerms::F3 { nu } => format!("f3 nu={nu}"),
            TableTerms::F4 { nu } => format!("f4 nu={nu}"),
        }
    }

    fn first_index(&self) -> u64 {
        match self {
            TableTerms::F1 { .. } | TableTerms::F2 { .. } => 0,
            TableTerms::F3 { .. } | TableTerms::F4 { .. } => 1,
        }
    }

    fn float_term(&self, n: u64) -> Result<f64> {
        match self {
            TableTerms::F1 { nu } => Ok(f1_term_float(n, *nu)),
            TableTerms::F2 { nu, y_f64, .. } => Ok(f2_term_float(n, *nu, *y_f64)),
            TableTerms::F3 { nu } => f3_term(n, *nu),
            TableTerms::F4 { nu } => f4_term(n, *nu),
        }
    }

    fn exact_term(&self, n: u64) -> Option<Result<ExactScalar>> {
        match self {
            TableTerms::F1 { nu } => Some(Ok(f1_term_exact(n, *nu))),
            TableTerms::F2 { nu, y, .. } => Some(Ok(ExactScalar::from_rational(f2_term_exact(n, *nu, y)))),
            _ => None,
        }
    }
}

/// The stream |C_n|² of a normalized trial function, in floating point.
///
/// F1 and F2 go through the table summands times the family constant; the
/// well families go through the unnormalized overlaps at the given width.
pub struct CoeffSquares {
    family: TrialFamily,
    norm_sq: f64,
    table: Option<(TableTerms, f64)>,
    well_scale: f64,
}

impl CoeffSquares {
    pub fn new(family: TrialFamily) -> Result<Self> {
        let norm_sq = family.norm_sq()?.value();
        let table = match &family {
            TrialFamily::F1 { nu } => {
                let k = crate::coeffs::f1_scale(*nu)?.to_f64();
                Some((TableTerms::F1 { nu: *nu }, k))
            }
            TrialFamily::F2 { nu, b } => {
                let t = TableTerms::new(Family::F2, *nu, Some(b))?;
                let TableTerms::F2 { y_f64, .. } = t else { unreachable!() };
                Some((t, norm_sq * f2_raw_scale(*nu, &y_f64)))
            }
            _ => None,
        };
        let well_scale = match &family {
            TrialFamily::F3 { .. } | TrialFamily::F4 { .. } => well_scale(&family)?,
            _ => 1.0,
        };
        Ok(CoeffSquares { family, norm_sq, table, well_scale })
    }
}

impl TermSource for CoeffSquares {
    fn label(&self) -> String {
        format!("|C_n|^2 {}", self.family)
    }

    fn first_index(&self) -> u64 {
        self.family.basis().first_index()
    }

    fn float_term(&self, n: u64) -> Result<f64> {
        match &self.table {
            Some((t, k)) => Ok(k * t.float_term(n)?),
            None => {
                let c = well_raw_overlap(&self.family, n)?;
                Ok(self.norm_sq * c * c)
            }
        }
    }

    fn tail_scale(&self) -> f64 {
        self.well_scale
    }
}
