use std::fmt;
use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Where in an input file a problem was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    /// 1-based line of a line-delimited file.
    Line(usize),
    /// Byte offset from the start of the file.
    Byte(u64),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Byte(n) => write!(f, "byte {n}"),
        }
    }
}

/// Malformed input file contents.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FormatError {
    #[error("{at}: {message}")]
    Syntax { at: Location, message: String },
    #[error("{at}: unknown field `{field}`")]
    UnknownField { at: Location, field: String },
    #[error("{at}: duplicate id {id:?}")]
    DuplicateId { at: Location, id: String },
    #[error("{at}: {message}")]
    Invalid { at: Location, message: String },
    #[error("{at}: expected magic {expected:?}")]
    BadMagic { at: Location, expected: &'static str },
    #[error("{at}: file ends inside {what}")]
    Truncated { at: Location, what: &'static str },
    #[error("{at}: vector has dimension {found}, expected {expected}")]
    DimensionMismatch { at: Location, expected: usize, found: usize },
    #[error("{at}: unexpected data after the last row")]
    TrailingData { at: Location },
}

impl FormatError {
    pub fn location(&self) -> Location {
        match self {
            FormatError::Syntax { at, .. }
            | FormatError::UnknownField { at, .. }
            | FormatError::DuplicateId { at, .. }
            | FormatError::Invalid { at, .. }
            | FormatError::BadMagic { at, .. }
            | FormatError::Truncated { at, .. }
            | FormatError::DimensionMismatch { at, .. }
            | FormatError::TrailingData { at } => *at,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {error}", path.display())]
    Io { path: PathBuf, error: std::io::Error },
    #[error("{}: {error}", path.display())]
    Format { path: PathBuf, error: FormatError },
    #[error(transparent)]
    Core(#[from] ecp_core::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), error: source }
    }

    pub(crate) fn format(path: impl Into<PathBuf>, source: FormatError) -> Self {
        Error::Format { path: path.into(), error: source }
    }
}
