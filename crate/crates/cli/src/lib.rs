//! Command-line front end: `coverage`, `width` and `lil-check`.
//!
//! Exit codes are 0 on success, 2 for usage or validation errors and 1 for
//! runtime failures.

pub mod args;
pub mod commands;
pub mod config;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

use crate::args::{Cli, Command, Format};
use crate::config::{resolve, OutputOptions, RunConfig, SEED_ENV};
use crate::report::Report;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

impl From<heavytail_cs::Error> for CliError {
    fn from(e: heavytail_cs::Error) -> Self {
        use heavytail_cs::Error as E;
        match e {
            E::Domain { .. } | E::Config(_) | E::InfiniteMoment { .. } => CliError::Usage(e.to_string()),
            E::State(_) | E::Numeric(_) => CliError::Runtime(e.to_string()),
        }
    }
}

/// Runs a resolved command and returns its report.
pub fn execute(cfg: &RunConfig, opts: &OutputOptions) -> Result<Report, CliError> {
    match cfg.command.as_str() {
        "coverage" => commands::coverage(cfg, opts),
        "width" => commands::width(cfg, opts),
        "lil-check" => commands::lil_check(cfg, opts),
        other => Err(CliError::Usage(format!("unknown command {other}"))),
    }
}

pub fn render(report: &Report, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn dispatch(command: &Command) -> Result<(), CliError> {
    let env_seed = std::env::var(SEED_ENV).ok();
    let (cfg, opts) = resolve(command.name(), command.args(), env_seed.as_deref())?;
    let report = execute(&cfg, &opts)?;
    let text = render(&report, opts.format)?;
    match &opts.output {
        Some(path) => commands::write_file(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(format!("writing to stdout: {e}"))),
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
