use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("no factorization: {0}")]
    NoFactorization(String),
    #[error("ambiguous factorization: {0}")]
    AmbiguousFactorization(String),
    #[error("not an exact factorization: {0}")]
    NotExactFactorization(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("bad leg index: {0}")]
    BadLegIndex(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("pairing mismatch: {0}")]
    PairingMismatch(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("not finitely supported: {0}")]
    NotFinitelySupported(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }

    /// Re-tag a parse error with the line it occurred on.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { msg, .. } => Error::Parse { line, msg },
            other => Error::Parse { line, msg: other.to_string() },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
