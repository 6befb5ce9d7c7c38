use thiserror::Error;

/// Errors shared across the crate. Mathematical negatives (a package check
/// failing, a class not being found) are *not* errors; they are reported
/// through the relevant result structs.
#[derive(Debug, Error)]
pub enum GkmError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    #[error("malformed skeleton: {0}")]
    MalformedSkeleton(String),

    #[error("vector is zero where a nonzero vector is required")]
    ZeroVector,

    #[error("xi is not polarizing: edge {edge} pairs to zero")]
    NotPolarizing { edge: usize },

    #[error("xi is not generic: {0}")]
    NotGeneric(String),

    #[error("orientation has a cycle: {0:?}")]
    Cyclic(Vec<String>),

    #[error("no xi found after {attempts} attempts ({summary})")]
    XiSearchExhausted { attempts: usize, summary: String },

    #[error("{0} is a critical level (equals a Morse value)")]
    CriticalLevel(String),

    #[error("level {0} outside the admissible window")]
    LevelOutsideWindow(String),

    #[error("genericity violation: {0}")]
    GenericityViolation(String),

    #[error("irregular component: valences {0:?}")]
    IrregularComponent(Vec<usize>),

    #[error("schema error: {0}")]
    Schema(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, GkmError>;
