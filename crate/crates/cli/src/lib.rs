//! Library side of the `twocoin` binary: argument types, the subcommands and
//! report rendering. Every subcommand returns a [`Report`] whose `config` is
//! the fully resolved [`Command`], so feeding it back to [`run`] reproduces
//! the same `result`.

pub mod args;
pub mod commands;
pub mod payload;
pub mod render;

pub use args::{Cli, Command, Common, Format};
pub use commands::{cmd_compile, cmd_search, cmd_sample, cmd_tomography, cmd_transfer};

use serde::{Deserialize, Serialize};
use std::fmt;

pub const TOOL: &str = "twocoin";

/// Exit status for a failed equivalence verdict.
pub const EXIT_VERIFICATION: i32 = 3;
/// Exit status for invalid arguments. Matches what clap uses.
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_OTHER: i32 = 1;

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: Command,
    pub result: serde_json::Value,
    #[serde(default)]
    pub warnings: Vec<String>,
}

/// Rows for the csv and text renderings.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    /// Key/value lines shown above the table in text output.
    pub notes: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Report,
    pub table: Table,
    /// Set when a verification the command ran came out negative.
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Usage,
            message: message.into(),
        }
    }

    pub fn other(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Other,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Usage => EXIT_USAGE,
            ErrorKind::Other => EXIT_OTHER,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<twocoin::Error> for CliError {
    fn from(e: twocoin::Error) -> Self {
        use twocoin::Error as E;
        let kind = match e {
            E::InvalidLayout(_)
            | E::DimensionMismatch { .. }
            | E::NotNormalized(_)
            | E::OutOfRange { .. }
            | E::DimensionGuard { .. }
            | E::InvalidSchedule(_)
            | E::Unsupported(_)
            | E::SearchGuard(_) => ErrorKind::Usage,
            _ => ErrorKind::Other,
        };
        CliError {
            kind,
            message: e.to_string(),
        }
    }
}

pub fn run(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Transfer(a) => cmd_transfer(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Tomography(a) => cmd_tomography(a),
        Command::Compile(a) => cmd_compile(a),
        Command::Search(a) => cmd_search(a),
    }
}

/// Runs a report's echoed config again.
pub fn replay(report: &Report) -> Result<Outcome, CliError> {
    run(report.config.clone())
}
