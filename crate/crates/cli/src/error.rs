use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown scenario '{0}' (known: {known})", known = crate::scenarios::SCENARIOS.join(", "))]
    UnknownScenario(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{scenario}: {source}")]
    Model {
        scenario: &'static str,
        #[source]
        source: floquet_core::Error,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("manifest {}: {reason}", path.display())]
    Manifest { path: PathBuf, reason: String },
}

impl CliError {
    /// 1 for caller mistakes, 2 for numerical or environmental failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::UnknownScenario(_) | CliError::Config(_) => 1,
            CliError::Model { source, .. } if source.is_validation() => 1,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
