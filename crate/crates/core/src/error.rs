use thiserror::Error;

/// Errors produced by the kicked-top laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("the closed-form classical map requires p = π/2, got p = {0}")]
    UnsupportedRotationAngle(f64),

    #[error("invalid spin quantum number j = {0}: 2j must be a nonnegative integer")]
    InvalidSpin(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized (norm = {0})")]
    NotNormalized(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("the normalization condition has no nontrivial root for kappa = {0}")]
    NoRoot(f64),

    #[error("bisection bracket failed for kappa = {kappa}: {reason}")]
    BracketFailed { kappa: f64, reason: String },

    #[error("orbit {label} does not close under the map (residual {residual:e})")]
    OrbitNotClosed { label: String, residual: f64 },

    #[error("two distinct orbit points coincide; no finite j makes their coherent states orthogonal")]
    NoFiniteJ,

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the numerics (as opposed to bad input or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoRoot(_)
                | Error::BracketFailed { .. }
                | Error::OrbitNotClosed { .. }
                | Error::NoFiniteJ
                | Error::NotNormalized(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
