//! Error type shared by all modules.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A point or map has the wrong ambient dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// An operation that needs a nonzero polynomial received the zero polynomial.
    #[error("zero polynomial: {context}")]
    ZeroPolynomial { context: &'static str },

    /// A coefficient or coordinate was NaN or infinite.
    #[error("non-finite scalar in {context}")]
    NonFinite { context: &'static str },

    /// A contract precondition failed (argument outside its stated range).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A disc failed the domain-containment check.
    #[error("disc containment failed: margin {margin:.3e} below slack {slack:.3e}")]
    Containment { margin: f64, slack: f64 },

    /// Möbius recentering could not meet its truncation tail bound.
    #[error("recenter degree cap exceeded for |b| = {modulus:.6} (need degree {needed})")]
    DegreeCap { modulus: f64, needed: usize },

    /// No closed-form oracle matches the given ideal.
    #[error("no closed-form oracle matches the ideal")]
    NoOracle,

    /// A verification run could not gather enough valid samples.
    #[error("inconclusive check: {0}")]
    Inconclusive(String),
}

/// Convenience alias.
pub type Result<T> = std::result::Result<T, CoreError>;
