use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("degenerate batch: {entries} entries per channel, need at least 2")]
    DegenerateBatch { entries: usize },
    #[error("label {0} out of range")]
    Label(usize),
    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },
    #[error("forward state missing: {0}")]
    State(&'static str),
    #[error("data error: {0}")]
    Data(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("band powers undefined: no spectral power in 1-30 Hz")]
    UndefinedFeatures,
    #[error("fit error: {0}")]
    Fit(String),
    #[error("split error: {0}")]
    Split(String),
}

impl Error {
    pub(crate) fn dim(what: &'static str, expected: usize, found: usize) -> Self {
        Error::Dimension {
            what,
            expected,
            found,
        }
    }
}
