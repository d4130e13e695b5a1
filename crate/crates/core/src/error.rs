use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        message: String,
    },

    #[error("{source_name}:{line}: duplicate journal id `{id}`")]
    DuplicateKey {
        source_name: String,
        line: u64,
        id: String,
    },

    #[error("unknown journal id `{id}`{}", context_suffix(.context))]
    UnresolvedReference { id: String, context: Option<String> },

    #[error("no citation data for year {0}")]
    MissingYear(i32),

    #[error("journal `{id}` has no citations in year {year}")]
    AbsentInYear { id: String, year: i32 },

    #[error("invalid value: {0}")]
    Validation(String),

    #[error("inconsistent inputs: {0}")]
    Consistency(String),

    #[error("numerical failure: {message} (iteration {iteration}, energy {energy})")]
    Numerical {
        message: String,
        iteration: usize,
        energy: f64,
    },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn context_suffix(context: &Option<String>) -> String {
    context
        .as_ref()
        .map(|c| format!(" ({c})"))
        .unwrap_or_default()
}

/// Coarse failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Data,
    Numerical,
    Io,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Parse => 2,
            ErrorClass::Data => 3,
            ErrorClass::Numerical => 4,
            ErrorClass::Io => 5,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse { .. } | Error::DuplicateKey { .. } => ErrorClass::Parse,
            Error::UnresolvedReference { .. }
            | Error::MissingYear(_)
            | Error::AbsentInYear { .. }
            | Error::Validation(_)
            | Error::Consistency(_) => ErrorClass::Data,
            Error::Numerical { .. } => ErrorClass::Numerical,
            Error::Io { .. } => ErrorClass::Io,
        }
    }

    pub(crate) fn unresolved(id: impl Into<String>) -> Self {
        Error::UnresolvedReference {
            id: id.into(),
            context: None,
        }
    }

    pub(crate) fn parse(source_name: &str, line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
