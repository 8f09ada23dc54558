use thiserror::Error;

/// Errors shared by every module of the laboratory.
#[derive(Debug, Error)]
pub enum LabError {
    /// A precondition on the inputs failed.
    #[error("invalid input: {0}")]
    Validation(String),

    /// The requested computation exceeds the configured work budget.
    /// Kernels fail loudly instead of truncating.
    #[error("work budget exceeded: needs {needed} units, budget is {budget}")]
    Budget { needed: u128, budget: u128 },

    /// A phase value left the exactly-reducible integer range.
    #[error("range error: {0}")]
    Range(String),
}

impl LabError {
    pub fn validation(msg: impl Into<String>) -> Self {
        LabError::Validation(msg.into())
    }

    pub fn range(msg: impl Into<String>) -> Self {
        LabError::Range(msg.into())
    }

    /// Process exit code used by the CLI: 2 for validation, 3 for budget.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Validation(_) | LabError::Range(_) => 2,
            LabError::Budget { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
