use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("a state needs at least one mode")]
    NoModes,

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not symplectic (max |S^T Ω S - Ω| = {residual:e})")]
    NotSymplectic { residual: f64 },

    #[error("covariance matrix is not symmetric (max asymmetry {asymmetry:e})")]
    AsymmetricCovariance { asymmetry: f64 },

    #[error("covariance violates the uncertainty relation (min eigenvalue of V + iΩ/2 = {min_eigenvalue:e})")]
    Unphysical { min_eigenvalue: f64 },

    #[error("expected a single-mode state, got {0} modes")]
    NotSingleMode(usize),

    #[error("covariance matrix is singular (det = {det:e})")]
    SingularCovariance { det: f64 },

    #[error("duplicate mode index {0}")]
    DuplicateMode(usize),

    #[error("matrix exponential failed accuracy check: {0}")]
    Exponential(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("measurement conditioning is singular: {0}")]
    SingularConditioning(String),

    #[error("Fock truncation too small: {0}")]
    Truncation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
