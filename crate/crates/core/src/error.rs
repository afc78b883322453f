use thiserror::Error;

/// Errors raised by the norm and embedding operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("exponent p must be a finite real with p > 1 and a finite conjugate q > 1, got {0}")]
    InvalidExponent(f64),

    #[error("invalid {field}: {reason}")]
    InvalidInput { field: &'static str, reason: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("target level {target} exceeds source level {source_level}")]
    LevelTooFine { target: usize, source_level: usize },

    #[error("block (n={level}, j={block}) out of range for k={k}, N={top_level}")]
    BlockOutOfRange {
        level: usize,
        block: usize,
        k: usize,
        top_level: usize,
    },

    #[error("stack is not dyadically consistent: violation {violation:e} at (n={level}, j={block})")]
    NotConsistent {
        level: usize,
        block: usize,
        violation: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("expected length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("tower is empty")]
    EmptyTower,
}

pub type Result<T> = std::result::Result<T, Error>;
