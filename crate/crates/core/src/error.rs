use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation (depth mismatch,
    /// vertex too deep, level out of range).
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data does not have the required structure. `level` names the
    /// tree level at which the violation was detected, when there is one.
    #[error("structure error{}: {message}", level.map(|l| format!(" at level {l}")).unwrap_or_default())]
    Structure {
        level: Option<usize>,
        message: String,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A configured size bound was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// An invariant that should hold for any valid input failed. Indicates a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("unsupported scale: {0}")]
    Unsupported(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn structure(level: Option<usize>, msg: impl Into<String>) -> Self {
        Error::Structure {
            level,
            message: msg.into(),
        }
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }
}
