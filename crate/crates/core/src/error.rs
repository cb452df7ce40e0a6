use thiserror::Error;

use crate::sdp::SdpStatus;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (asymmetric part {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("operation needs subsystem shape metadata")]
    MissingShape,

    #[error("eigensolver did not converge after {0} sweeps")]
    EigenNonConvergence(usize),

    #[error("argument out of domain: {0}")]
    Domain(String),

    #[error("SDP solver failed with status {0:?}")]
    Solver(SdpStatus),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
