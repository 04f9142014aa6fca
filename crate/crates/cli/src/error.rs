use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] polygeo_core::Error),
    #[error("{0}")]
    BadArgs(String),
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.code(),
            CliError::BadArgs(_) => "BadArgs",
            CliError::Write { .. } => "WriteFailed",
        }
    }

    /// The machine-readable form printed on stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Payload<'a> {
            error: &'a str,
            detail: String,
        }
        serde_json::to_string(&Payload {
            error: self.code(),
            detail: self.to_string(),
        })
        .expect("plain data")
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
