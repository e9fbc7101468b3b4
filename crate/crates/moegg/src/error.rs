use thiserror::Error;

/// Errors produced by the moegg library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MoeggError {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A parameter vector violates its positivity or ordering constraints.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    /// A dataset failed validation.
    #[error("invalid data: {0}")]
    Data(String),
    /// Input could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// An iterative procedure failed to reach its tolerance.
    #[error("did not converge: {0}")]
    NonConvergence(String),
    /// Filesystem failure while reading input or writing output.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, MoeggError>;

impl MoeggError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        MoeggError::Domain(msg.into())
    }
}
