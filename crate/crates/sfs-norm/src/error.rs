use std::io;
use std::path::PathBuf;

use sfs_norm_core::ErrorKind;

/// Errors surfaced by the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] sfs_norm_core::Error),
    #[error("line {line}: {message}")]
    FamilySpec { line: usize, message: String },
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// 1 for usage and parse problems, 2 for invalid input, 3 for internal failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Syntax => 1,
                ErrorKind::Invalid => 2,
                ErrorKind::Internal => 3,
            },
            CliError::FamilySpec { .. } | CliError::Io { .. } => 1,
            CliError::Output(_) | CliError::Csv(_) | CliError::Json(_) => 3,
        }
    }
}
