use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solvers and graph builders.
///
/// `Internal` never signals bad input: it means an identity that must hold
/// by construction was violated, so the result cannot be trusted.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QecError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph is not connected: vertices {0} and {1} are mutually unreachable")]
    NotConnected(usize, usize),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown graph family `{0}`")]
    UnknownFamily(String),

    #[error("edge list file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("malformed edge list {}: {message}", path.display())]
    EdgeList { path: PathBuf, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

impl QecError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        QecError::InvalidArgument(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        QecError::Internal(msg.into())
    }

    /// True for errors caused by malformed textual input.
    pub fn is_parse_error(&self) -> bool {
        matches!(
            self,
            QecError::Syntax { .. }
                | QecError::UnknownFamily(_)
                | QecError::FileNotFound(_)
                | QecError::EdgeList { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, QecError>;
