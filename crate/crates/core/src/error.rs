use thiserror::Error;

/// Errors raised by the lamination toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("degree must be at least 2, got {0}")]
    Degree(u32),
    #[error("chord {0} is critical: its image is a single point")]
    CriticalChord(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    ParseLine { line: usize, msg: String },
    #[error("malformed critical pattern: {0}")]
    MalformedPattern(String),
    #[error("invalid portrait: {0}")]
    InvalidPortrait(String),
    #[error("ambiguous pullback branch at {0}")]
    AmbiguousBranch(String),
    #[error("quadrilateral {0} is not realized in the lamination")]
    NotRealized(String),
    #[error("sequence does not converge: {0}")]
    NonConvergent(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Attaches a 1-based line number to a parse error.
    pub fn at_line(self, line: usize) -> Error {
        match self {
            Error::Parse(msg) => Error::ParseLine { line, msg },
            other => other,
        }
    }
}
