use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] somno_core::Error),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn format(path: &Path, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.to_path_buf(),
            message: message.into(),
        }
    }

    /// 1 usage, 2 data or format, 3 runtime failure.
    pub fn exit_code(&self) -> i32 {
        use somno_core::Error as E;
        match self {
            Error::Usage(_) | Error::Core(E::Argument(_)) => 1,
            Error::Io { .. } | Error::Format { .. } => 2,
            Error::Core(E::Data(_) | E::Split(_) | E::UndefinedFeatures | E::Label(_)) => 2,
            Error::Core(_) => 3,
        }
    }
}

/// A decoding failure located at a byte offset.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("byte {offset}: {message}")]
pub struct DecodeError {
    pub offset: usize,
    pub message: String,
}

impl DecodeError {
    pub(crate) fn new(offset: usize, message: impl Into<String>) -> Self {
        DecodeError {
            offset,
            message: message.into(),
        }
    }

    pub fn at(self, path: &Path) -> Error {
        Error::format(path, self.to_string())
    }
}
