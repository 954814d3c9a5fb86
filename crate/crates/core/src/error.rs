use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("eigenvalue iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("grid is not uniform over [0, 2pi): {0}")]
    NonUniformGrid(String),

    #[error("determinant identity mismatch: {lhs} vs {rhs}")]
    DeterminantMismatch { lhs: f64, rhs: f64 },

    #[error("enumeration of {required} candidate supports exceeds cap {cap}")]
    EnumerationCap { required: u128, cap: u128 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("spectrum parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
