use std::path::PathBuf;

use thiserror::Error;

/// Failures of the runner, with the exit-code contract of the CLI.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("config error: {0}")]
    Config(String),
    #[error("cannot parse {path}: {detail}")]
    Parse { path: PathBuf, detail: String },
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] polarlab_core::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    /// 2 for configuration and file problems, 3 when the memory budget is
    /// exceeded, 4 for invalid inputs caught by the core library.
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Core(polarlab_core::Error::BudgetExceeded { .. }) => 3,
            LabError::Core(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }
}
