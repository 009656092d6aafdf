//! Numerical and exact verification of infinite-series identities obtained by
//! expanding trial wave functions in the eigenbases of the half harmonic
//! oscillator and the infinite square well.
//!
//! Each identity states that the squared expansion coefficients of a
//! normalized trial function sum to one; rearranged, that is a closed form for
//! a series of Hermite/Laguerre/hypergeometric or Bessel/Struve terms.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod coeffs;
pub mod compensated;
pub mod error;
pub mod exactnum;
pub mod hp;
pub mod identities;
pub mod qmodels;
pub mod quadrature;
pub mod real;
pub mod series_engine;
pub mod specfun;

pub use error::{Error, Result};
pub use exactnum::{ClosedFormConstant, ClosedValue, ExactScalar, ExpPolyForm};
pub use hp::Hp;
pub use identities::{CheckId, CheckReport, IdentitySpec, Verification};
pub use qmodels::{Family, TrialFamily};
pub use series_engine::{StopRule, SumMode, SumPolicy, SumReport, TailModel, TermSource};
