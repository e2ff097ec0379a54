//! Crate-wide error type.
//!
//! Three failure families matter to callers (and map onto the CLI exit
//! codes): input that is invalid or degenerate, inputs that are legal but
//! admit no solution, and numerical breakdowns (non-convergence, tolerance
//! blow-ups). I/O and serialisation errors are passed through.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a precondition: degenerate geometry (parallel lines,
    /// zero distances), angle invariants outside the admissible open region,
    /// integer exponents, malformed or contradictory configuration.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Input is well-formed but the requested object does not exist
    /// (e.g. the period system has no real solution).
    #[error("no solution: {0}")]
    Empty(String),

    /// A numerical procedure failed to reach its stated tolerance.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialisation error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn empty(msg: impl Into<String>) -> Self {
        Error::Empty(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Process exit code for the CLI: 2 invalid input, 3 legal-but-empty,
    /// 4 numerical failure (I/O and serialisation count as invalid input).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Empty(_) => 3,
            Error::Numerical(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
