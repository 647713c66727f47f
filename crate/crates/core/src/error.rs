use std::path::PathBuf;

use thiserror::Error;

use crate::stats::StatsError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A malformed record. `line` is 1-based and counts the header.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("config: {0}")]
    Config(String),

    #[error("infeasible synthetic config: {0}")]
    Infeasible(String),

    #[error("bundle exceeds guard rail: {0}")]
    GuardRail(String),

    #[error("graph cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Stats(#[from] StatsError),

    #[error("{context}: {source}")]
    Context {
        context: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn parse(source_name: impl Into<String>, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            message: message.into(),
        }
    }

    /// Wraps the error with the name of the stage that produced it.
    pub fn context(self, context: impl Into<String>) -> Self {
        Error::Context {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True when the failure is attributable to the caller's inputs rather
    /// than to the engine. The CLI maps this to exit code 2.
    pub fn is_input_error(&self) -> bool {
        match self {
            Error::Read { .. }
            | Error::Parse { .. }
            | Error::Invalid(_)
            | Error::Config(_)
            | Error::Infeasible(_)
            | Error::GuardRail(_) => true,
            Error::Write { .. } | Error::Cache(_) | Error::Stats(_) => false,
            Error::Context { source, .. } => source.is_input_error(),
        }
    }
}
