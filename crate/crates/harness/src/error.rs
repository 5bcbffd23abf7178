use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One video that could not be evaluated, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VideoFailure {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    /// Too many videos failed; the roster lists every failure.
    #[error("run failed: {}/{} videos failed", roster.len(), total)]
    Run {
        total: usize,
        roster: Vec<VideoFailure>,
    },
    #[error(transparent)]
    Core(#[from] rppg_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    /// Process exit code: 2 for run failures, 3 for configuration errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
