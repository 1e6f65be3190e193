//! Command-line front end for `mgi-core`: ingestion, analysis, simulation,
//! forecasting and run reports.
//!
//! Every command writes its artifacts plus a `manifest.json` into an output
//! directory and maps failures onto stable exit codes (see [`CliError`]).

mod args;
pub mod commands;
mod manifest;

pub use args::{Analysis, Cli, Command};
pub use manifest::RunManifest;

use std::path::Path;

use mgi_core::forecast::ForecastError;
use mgi_core::simgrid::SimError;
use mgi_core::telemetry::TelemetryError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    /// 0 success, 1 I/O or parse, 2 config or schema, 3 usage, 4 data precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Usage(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }

    pub(crate) fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

impl From<TelemetryError> for CliError {
    fn from(e: TelemetryError) -> Self {
        match e {
            TelemetryError::MissingTimestampColumn(_)
            | TelemetryError::MissingColumn(_)
            | TelemetryError::Schema(_) => CliError::Config(e.to_string()),
            TelemetryError::Io(_) | TelemetryError::NonMonotone { .. } | TelemetryError::EmptyRecords => {
                CliError::Io(e.to_string())
            }
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Config(_) | SimError::Params(_) => CliError::Config(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ForecastError> for CliError {
    fn from(e: ForecastError) -> Self {
        match e {
            ForecastError::Sim(e) => e.into(),
            ForecastError::EmptyHorizon => CliError::Usage(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Ingest(a) => commands::ingest::run(a),
        Command::Analyze(a) => commands::analyze::run(a),
        Command::Simulate(a) => commands::simulate::run(a),
        Command::Forecast(a) => commands::forecast::run(a),
        Command::Report(a) => commands::report::run(a),
    }
}
