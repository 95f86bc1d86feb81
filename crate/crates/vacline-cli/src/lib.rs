//! Library side of the command-line front end: row evaluation, sweep
//! machinery, SVG rendering, and the reproduction suite. The `vacline`
//! binary is a thin argument-parsing layer over this.

pub mod checks;
pub mod runner;
pub mod svg;

use std::fmt;

/// Process-level failure modes, mapped onto exit codes by the binary:
/// configuration errors exit 2, numerical failures 3, reproduction-check
/// failures 4.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    ChecksFailed(usize),
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::ChecksFailed(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Numerical(msg) => write!(f, "numerical failure: {msg}"),
            CliError::ChecksFailed(n) => write!(f, "{n} acceptance check(s) failed"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}
