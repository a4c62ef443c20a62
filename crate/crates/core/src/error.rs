use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GapError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// QR iteration hit its sweep cap. `partial` holds the eigenvalues that
    /// did deflate before the failure.
    #[error("eigensolver failed to converge after {iterations} sweeps ({unconverged} eigenvalues outstanding)")]
    NoConvergence {
        iterations: usize,
        unconverged: usize,
        partial: Vec<Complex64>,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("truncation budget exceeded: {0}")]
    Truncation(String),

    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaMismatch { expected: u32, found: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, GapError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(GapError::InvalidArgument(msg.into()))
}
