use std::path::PathBuf;

use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the scattering library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input too short: need at least {needed} samples, got {got}")]
    InputSize { needed: usize, got: usize },

    #[error("rational coefficient denominator vanished (|den| = {magnitude:e}) at lambda^2 = {mu}")]
    PoleProximity { mu: Complex64, magnitude: f64 },

    #[error("no fast polynomial form for scheme {0}")]
    UnsupportedFastScheme(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("|a'| = {magnitude:e} at zeta = {zeta}: not a simple eigenvalue")]
    DegenerateEigenvalue { zeta: Complex64, magnitude: f64 },

    #[error("non-uniform time column at row {row}: relative jitter {jitter:e}")]
    NonUniformGrid { row: usize, jitter: f64 },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("reference computation failed: {0}")]
    Reference(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
