use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug)]
pub enum Error {
    /// A state or input carried non-finite or otherwise invalid values.
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("shape mismatch for {name}: expected {expected:?}, got {got:?}")]
    ShapeMismatch {
        name: String,
        expected: Vec<usize>,
        got: Vec<usize>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    /// Checkpoint was produced for a different network/layout configuration.
    #[error("checkpoint spec hash mismatch: file has {found:016x}, expected {expected:016x}")]
    CheckpointMismatch { found: u64, expected: u64 },

    /// A training update produced non-finite network output.
    #[error("numerical fault: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid_state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }
}
