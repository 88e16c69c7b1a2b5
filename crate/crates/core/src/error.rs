//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("test cases have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("strength must be at least 1 (got {t})")]
    StrengthTooSmall { t: usize },

    #[error("strength exceeds parameter count (t = {t}, parameters = {k})")]
    StrengthExceedsParameters { t: usize, k: usize },

    #[error("model is unsatisfiable: {reason}")]
    Unsatisfiable { reason: String },

    #[error("forbidden-tuple derivation exceeded the cap of {cap} tuples")]
    DerivationCapExceeded { cap: usize },

    #[error("exhaustive enumeration would exceed the cap of {cap} test cases")]
    EnumerationCapExceeded { cap: u64 },

    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),

    #[error("search failed: {0}")]
    Search(String),
}
