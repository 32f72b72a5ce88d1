use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("spline order {order} outside supported range 0..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("filter has no nonzero taps")]
    EmptyFilter,

    #[error(
        "filter is not appropriate: tap polynomial has a zero at modulus {modulus:.12} (on the unit circle)"
    )]
    NotAppropriate { modulus: f64 },

    #[error("Toeplitz system is not positive definite (pivot {pivot} = {value:e})")]
    SingularSystem { pivot: usize, value: f64 },

    #[error("kernel value at t = {index} is {got}, constraint requires {expected}")]
    ConstraintViolation { index: usize, expected: f64, got: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Numerical failures (as opposed to bad input or I/O).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotAppropriate { .. } | Error::SingularSystem { .. } | Error::ConstraintViolation { .. }
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
