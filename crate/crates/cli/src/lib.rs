//! Command-line front end: configuration, dataset wiring, analysis dispatch,
//! and report emission.
//!
//! Every subcommand is a pure function of its input files and resolved
//! configuration; re-running a command produces byte-identical output files.
//! Exit codes: 0 success, 1 usage error, 2 data error.

mod cli;
mod commands;
mod config;
mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use config::{OutputFormat, RunConfig};

/// Outcome classes a command can end in; maps onto the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, bad config values: exit 1.
    Usage(String),
    /// Unreadable or malformed data, unwritable outputs: exit 2.
    Data(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => write!(f, "{m}"),
        }
    }
}

impl From<hotstreak::ingest::IngestError> for CliError {
    fn from(e: hotstreak::ingest::IngestError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<hotstreak::analyses::AnalysisError> for CliError {
    fn from(e: hotstreak::analyses::AnalysisError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<hotstreak::simulate::SimError> for CliError {
    fn from(e: hotstreak::simulate::SimError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

/// Parse `argv`, run the requested subcommand, and return the exit code.
pub fn run_command<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let parsed = match cli::Cli::try_parse_from(argv) {
        Ok(parsed) => parsed,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(parsed) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
