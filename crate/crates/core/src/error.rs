use thiserror::Error;

/// Every failure the library reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter constraint violated: {0}")]
    Domain(String),
    #[error("depth {depth} exceeds the representable precision ({limit})")]
    PrecisionExceeded { depth: usize, limit: String },
    #[error("series term {index} is not positive")]
    NonPositiveTerm { index: usize },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("H^(s,2) norm of a characteristic function diverges for s = {s} >= 1/2")]
    Divergent { s: f64 },
    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
