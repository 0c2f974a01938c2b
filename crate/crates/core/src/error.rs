use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("mode index {k} outside [-{half}, {half})")]
    ModeIndex { k: i64, half: i64 },

    #[error("grid mismatch: {0} points vs {1} points")]
    GridMismatch(usize, usize),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("usage error: {0}")]
    Usage(String),

    /// A probability or norm drifted outside its admissible range.
    #[error("numerical consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
