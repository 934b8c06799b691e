//! Library surface behind the `razavy` binary: argument and config parsing,
//! fixed-format emitters, the bundled reference table, and the command
//! implementations. The binary in `main.rs` is a thin dispatcher.

pub mod args;
pub mod commands;
pub mod config;
pub mod fmt;
pub mod reference;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: usage: {msg}"),
            CliError::Numeric(msg) => write!(f, "error: numeric: {msg}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }
}
