use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Core(#[from] holo_core::Error),

    #[error("{0}")]
    ChecksFailed(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Attaches a file name to errors about a file's contents, keeping the
    /// error class (and so the exit code).
    pub fn in_file(path: impl Into<PathBuf>, err: holo_core::Error) -> Self {
        use holo_core::Error as E;
        let path = path.into();
        let named = |msg: String| format!("{}: {msg}", path.display());
        match err {
            E::Format { .. } => CliError::parse(path, err.to_string()),
            E::Integrity(msg) => CliError::Core(E::Integrity(named(msg))),
            E::Protocol(msg) => CliError::Core(E::Protocol(named(msg))),
            other => CliError::Core(other),
        }
    }

    pub fn exit_code(&self) -> u8 {
        use holo_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } | CliError::Parse { .. } => 3,
            CliError::ChecksFailed(_) => 1,
            CliError::Core(e) => match e {
                E::InvalidArgument(_) | E::InvalidState(_) | E::UndefinedPsnr => 2,
                E::Format { .. } => 3,
                E::Integrity(_) | E::Protocol(_) => 4,
            },
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
