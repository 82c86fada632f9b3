use std::path::PathBuf;

use genlimit_core::density::DensityError;
use genlimit_core::game::GameError;
use genlimit_core::topology::TopologyError;
use genlimit_core::FamilyError;

/// Exit code for a malformed or inconsistent configuration.
pub const EXIT_CONFIG: i32 = 2;
/// Exit code when some sweep rows failed.
pub const EXIT_PARTIAL: i32 = 3;
/// Exit code for any other failure.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("config: {0}")]
    Config(String),
    #[error("family: {0}")]
    Family(#[from] FamilyError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

impl HarnessError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl ToString) -> Self {
        HarnessError::Parse {
            path: path.into(),
            message: message.to_string(),
        }
    }

    /// Whether the error stems from the configuration rather than the run.
    pub fn is_config(&self) -> bool {
        match self {
            HarnessError::Config(_) | HarnessError::Family(_) | HarnessError::Parse { .. } => true,
            HarnessError::Io { source, .. } => source.kind() == std::io::ErrorKind::NotFound,
            HarnessError::Game(e) => matches!(e, GameError::Config(_) | GameError::Adversary(_)),
            HarnessError::Topology(e) => {
                matches!(
                    e,
                    TopologyError::EmptyRestriction
                        | TopologyError::BadIndex(_)
                        | TopologyError::ShortSequence
                )
            }
            HarnessError::Density(_) => false,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_config() {
            EXIT_CONFIG
        } else {
            EXIT_FAILURE
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
