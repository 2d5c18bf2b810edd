use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("point outside the admissible domain: {0}")]
    OutOfDomain(String),

    #[error("evaluation on a singular set: {0}")]
    Singular(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("map construction failed: {0}")]
    Construction(String),

    #[error("fold detected in the meridian map at (r, z) = ({r}, {z}): det = {det}")]
    Fold { r: f64, z: f64, det: f64 },

    #[error("Newton inversion did not converge after {iters} iterations (residual {residual:e})")]
    NonConvergence { iters: usize, residual: f64 },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, CoreError>;
