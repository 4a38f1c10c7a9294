//! Command-line front end for `qpke-core`: sweeps, figure data and
//! inequality checks written as CSV or JSON.

pub mod args;
pub mod commands;
pub mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

pub use args::{Cli, Command, Format, SweepArgs};
pub use commands::{Checks, Report, Violation};

/// Exit code when every requested check passed.
pub const EXIT_PASS: u8 = 0;
/// Exit code when at least one inequality was violated.
pub const EXIT_VIOLATION: u8 = 1;
/// Exit code for bad arguments and any other error.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qpke_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn is_broken_pipe(&self) -> bool {
        let kind = match self {
            CliError::Io(e) => Some(e.kind()),
            CliError::Csv(e) => match e.kind() {
                csv::ErrorKind::Io(io) => Some(io.kind()),
                _ => None,
            },
            CliError::Json(e) => e.io_error_kind(),
            _ => None,
        };
        kind == Some(io::ErrorKind::BrokenPipe)
    }
}

pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let args = &cli.sweep;
    match &cli.command {
        Command::Prior => commands::prior(args),
        Command::Figure { id } => commands::figure(*id, args),
        Command::Security => commands::security(args),
        Command::Montecarlo { attack } => commands::montecarlo(*attack, args),
        Command::CheckAll => commands::check_all(),
    }
}

/// Runs the command, writes its table and returns the process exit code.
pub fn run(cli: &Cli) -> u8 {
    match execute(cli) {
        Ok(report) => finish(&report, cli.sweep.format, cli.sweep.out.as_deref()),
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Writes warnings, the table and any violations, then picks the exit code.
pub fn finish(report: &Report, format: Format, out: Option<&Path>) -> u8 {
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    match emit(report, format, out) {
        Ok(()) => {}
        // downstream closed the pipe (`| head`); the verdict still stands
        Err(e) if e.is_broken_pipe() => {}
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    if report.checks.violations.is_empty() {
        EXIT_PASS
    } else {
        let list = serde_json::to_string_pretty(&report.checks.violations).expect("violations serialize");
        eprintln!("{list}");
        EXIT_VIOLATION
    }
}

fn emit(report: &Report, format: Format, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            report.table.write(format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            report.table.write(format, stdout.lock())?;
        }
    }
    Ok(())
}
