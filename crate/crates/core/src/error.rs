use std::path::PathBuf;

use thiserror::Error;

use crate::network::Diagnostic;

#[derive(Debug, Error)]
pub enum Error {
    /// An input value violates a documented invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// The network model failed one or more structural checks.
    #[error("invalid network: {}", join_diagnostics(.0))]
    InvalidNetwork(Vec<Diagnostic>),

    /// An operation was called on a model it is not defined for.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown link id '{0}'")]
    UnknownLink(String),

    #[error("{}:{line}:{column}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

fn join_diagnostics(diags: &[Diagnostic]) -> String {
    diags
        .iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
