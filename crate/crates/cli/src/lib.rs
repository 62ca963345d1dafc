//! Subcommands of the `rcbandit` binary.

pub mod commands;
pub mod plot;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] rcbandit::Error),
    #[error("{}: {message}", path.display())]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("audit failed: a violation rate exceeds the allowed rate")]
    AuditFailed,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// 2 for invalid input, 1 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_invalid_input() => 2,
            CliError::Input { .. } | CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}
