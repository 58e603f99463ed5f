use thiserror::Error;

/// Errors surfaced by the convex-order crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("improper function: {0}")]
    Improper(String),

    #[error("exact conjugation is capped at n <= 3, got n = {0}")]
    DimensionCap(usize),

    #[error("negative scale factor {0}")]
    NegativeScale(f64),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("not positively homogeneous: {0}")]
    NotHomogeneous(String),

    #[error("function must be finite on all of R^n: {0}")]
    RestrictedDomain(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("oracle call failed: {0}")]
    Oracle(String),

    #[error("oracle audit failed: {0}")]
    AuditFailed(String),

    #[error("oracle is not representable: {0}")]
    NonRepresentable(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
