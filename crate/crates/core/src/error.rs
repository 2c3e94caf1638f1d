//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A configured desk-scale bound was exceeded (enumeration, box size,
    /// intermediate ray counts). Deliberate: we error instead of silently
    /// truncating.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("fan axiom violation between cones {left} and {right}: {detail}")]
    FanAxiomViolation {
        left: usize,
        right: usize,
        detail: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("mismatched primes: {0} vs {1}")]
    MismatchedPrimes(u64, u64),

    #[error("chart mismatch: {0}")]
    ChartMismatch(String),

    /// No integral linearization exists on the named maximal cone.
    #[error("divisor is not Cartier: no integral linearization on maximal cone {cone}")]
    NotCartier { cone: usize },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    /// Two routes that must agree disagreed. Always a bug, never a user error.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("degenerate pairing at grade {0:?}")]
    DegeneratePairing(Vec<i64>),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
