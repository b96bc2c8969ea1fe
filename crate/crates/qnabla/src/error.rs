use thiserror::Error;

/// Failure modes for exact p-adic computations.
///
/// Arithmetic here never rounds: any operation that would lose digits
/// reports a `Precision` error with the exact deficit instead of returning
/// an approximate answer.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside an operation's domain (non-unit inverse, composite ell, ...).
    #[error("domain: {0}")]
    Domain(String),

    /// An exact division by p^needed was requested but the operand only
    /// carries p^available; the missing digits do not exist.
    #[error("precision: {context}: need divisibility by p^{needed}, have p^{available}")]
    Precision {
        needed: u32,
        available: u32,
        context: String,
    },

    /// Operation applied in a coordinate system it is not defined in.
    #[error("coordinates: {0}")]
    Coordinates(String),

    /// The lambda calibration search did not isolate a unique candidate.
    #[error("calibration: {0}")]
    Calibration(String),

    /// A verification suite ran to completion and found a failing check.
    #[error("verification: {0}")]
    Verification(String),

    /// Recognized but deliberately unimplemented territory (e.g. wild characters).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// Malformed or out-of-range serialized data.
    #[error("schema: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
