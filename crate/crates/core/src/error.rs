use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violated an operation's precondition.
    InvalidInput(String),
    /// A fitted constant needed for evaluation is absent from the parameters.
    MissingParam(String),
    /// Demonstrations were supplied but an embedding they reference is absent.
    MissingEmbedding(String),
    /// A statistic is undefined for the sample (zero variance, collinear points).
    DegenerateInput(String),
    /// The dataset carries no usable signal for fitting.
    DegenerateFit(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(m) => write!(f, "invalid input: {m}"),
            Error::MissingParam(m) => write!(f, "missing fitted parameter: {m}"),
            Error::MissingEmbedding(m) => write!(f, "missing embedding: {m}"),
            Error::DegenerateInput(m) => write!(f, "degenerate input: {m}"),
            Error::DegenerateFit(m) => write!(f, "degenerate fit: {m}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
