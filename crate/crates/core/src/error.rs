use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precision of {0} digits is below the supported floor of 15")]
    DigitsTooLow(u32),

    #[error("guard digits {0} below the minimum of 5")]
    GuardTooLow(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("pole of the gamma function at {0}")]
    Pole(String),

    #[error("non-finite value produced while evaluating {0}")]
    NonFinite(&'static str),

    #[error("loss of precision in {what}: {lost} digits cancelled, {available} guard digits available")]
    PrecisionLoss {
        what: &'static str,
        lost: u32,
        available: u32,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("zero on or within tolerance of the contour near {0}")]
    BoundaryZero(String),

    #[error("winding number not integral after refinement (distance {distance:.3} from {nearest})")]
    NonIntegralWinding { nearest: i64, distance: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Io(err.to_string())
    }
}
