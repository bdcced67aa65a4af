use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown factor label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate factor label `{0}`")]
    DuplicateLabel(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("eigenvalue {0:e} is below the PSD clamp window")]
    NotPositiveSemidefinite(f64),

    #[error("{what} out of range: {value}")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("Kraus index {index} exceeds truncation n_max = {n_max}")]
    KrausIndex { index: usize, n_max: usize },
}
