use std::path::PathBuf;

use bloch_trap_core::Error as CoreError;

/// Failures of a command, each tied to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("numerical guard: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 1,
            CliError::InvalidModel(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

/// Sorts a core error into the exit-code classes. Problems with the model
/// itself are exit 2, integration guards exit 4, and anything else is a bad
/// argument.
impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonTraceless { .. }
            | CoreError::NotHermitian { .. }
            | CoreError::NotPsd { .. }
            | CoreError::UnsortedEigenvalues
            | CoreError::DegenerateSystem
            | CoreError::EmptyModel => CliError::InvalidModel(e.to_string()),
            CoreError::RadiusUnderflow { .. }
            | CoreError::BallViolation { .. }
            | CoreError::EnvelopeMismatch { .. }
            | CoreError::DegenerateState => CliError::Numeric(e.to_string()),
            CoreError::InvalidDensity(_)
            | CoreError::NotUnit { .. }
            | CoreError::ZeroRadius
            | CoreError::InvalidArgument(_) => CliError::Usage(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
