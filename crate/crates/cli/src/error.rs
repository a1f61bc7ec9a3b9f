use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] atlas_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("fixture {name}: {reason}")]
    Fixture { name: String, reason: String },
    #[error("report encoding: {0}")]
    Encode(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code for the process: 2 for budget exceedances, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(atlas_core::Error::Budget(_))
            | CliError::Core(atlas_core::Error::CanonCap { .. })
            | CliError::Core(atlas_core::Error::IndexCap { .. }) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
