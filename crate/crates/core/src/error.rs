//! Error type shared across the crate, with process exit-code mapping for
//! the command-line frontend.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    /// Malformed or internally inconsistent fixture data.
    #[error("fixture error: {0}")]
    Fixture(String),

    /// A required condition on the smoothing set or auxiliary data fails.
    #[error("condition violation: {0}")]
    Condition(String),

    /// Bad arguments to a library operation.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An internal consistency check failed; this is a bug, never user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl CoreError {
    pub fn fixture(msg: impl Into<String>) -> Self {
        CoreError::Fixture(msg.into())
    }
    pub fn condition(msg: impl Into<String>) -> Self {
        CoreError::Condition(msg.into())
    }
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        CoreError::InvalidInput(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        CoreError::Internal(msg.into())
    }

    /// Process exit code: 2 fixture, 3 condition violation, 4 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CoreError::Fixture(_) | CoreError::InvalidInput(_) => 2,
            CoreError::Condition(_) => 3,
            CoreError::Internal(_) => 4,
        }
    }
}
