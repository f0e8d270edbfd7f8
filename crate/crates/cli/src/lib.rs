//! Scenario files, verification suites and TSV/SVG output for `packlab`.

pub mod commands;
pub mod expr;
pub mod scenario;
pub mod svg;
pub mod verify;

use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{file}:{line}: {msg}")]
    Syntax { file: String, line: usize, msg: String },
    #[error("expression `{text}`: {msg}")]
    Expr { text: String, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] packlab::Error),
}

macro_rules! core_error {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        })*
    };
}

core_error!(
    packlab::ScalarError,
    packlab::MatrixError,
    packlab::LorentzError,
    packlab::CoxeterError,
    packlab::PackingError,
    packlab::EuclidError
);

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
