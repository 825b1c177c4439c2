//! Experiment runner: JSON configs in, comparison CSVs and reports out.

pub mod commands;
pub mod config;
pub mod presets;
pub mod table;

/// Errors surfaced by the command-line tool, each with its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("comparison failed")]
    ComparisonFailed,
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::ComparisonFailed => 4,
        }
    }
}
