use thiserror::Error;

/// Errors produced by diagram parsing, validation-gated operations and the
/// exact arithmetic kernels.
#[derive(Debug, Error)]
pub enum Error {
    /// Input did not conform to the diagram JSON schema (syntax error,
    /// duplicate vertex id, dangling edge end, misplaced multiplicity).
    #[error("parse error: {0}")]
    Parse(String),

    /// A precondition of an operation was violated by the caller.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two diagrams cannot be spliced along the given arrowheads.
    #[error("splice compatibility error: {0}")]
    SpliceIncompatible(String),

    /// An internal cross-check failed. This indicates a bug, never bad input:
    /// quantities that the theory forces to agree did not.
    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("{e} (line {}, column {})", e.line(), e.column()))
    }
}
