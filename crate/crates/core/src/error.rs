use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("cannot add exact values carrying sqrt(pi)^{0} and sqrt(pi)^{1}")]
    MixedSqrtPiPower(i32, i32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("non-finite argument {0}")]
    NonFinite(f64),
    #[error("argument {x} outside the domain {domain}")]
    OutOfDomain { x: f64, domain: String },
    #[error("quadrature did not converge (value {value:e}, error estimate {error_estimate:e})")]
    QuadratureNotConverged { value: f64, error_estimate: f64 },
    #[error("no tabulated value for {family} at nu = {nu}")]
    NoTabulatedValue { family: String, nu: u32 },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("expression diverges as y -> 0")]
    DivergentLimit,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
