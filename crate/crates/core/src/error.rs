use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("config error at `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("epoch {got} is not after the last observed epoch {last}")]
    OutOfOrderEpoch { got: usize, last: usize },

    #[error("{0}")]
    IncompleteGrid(String),

    #[error("csv schema error: {0}")]
    Schema(String),

    #[error("{context}: {source}")]
    Run {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error on {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn config(key: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input (configs, parameters, CSV schemas)
    /// rather than by the run itself.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::InvalidParameter { .. } | Error::Config { .. } | Error::Schema(_) => true,
            Error::Run { source, .. } => source.is_input_error(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
