use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An op stream cannot be replayed or evaluated.
    #[error("invalid program at op {index}: {reason}")]
    InvalidOp { index: usize, reason: String },

    /// A program is malformed as a whole (empty, truncated, wrong output).
    #[error("invalid program: {0}")]
    InvalidProgram(String),

    /// The search budget does not even admit the naive program.
    #[error("search budget too small: {0}")]
    Budget(String),

    /// Cost-model configuration could not be parsed or validated.
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    /// Malformed textual input (sequences, combination files).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Random generation could not satisfy its constraints.
    #[error("generation failed: {0}")]
    Generation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
