pub mod analyze;
pub mod forecast;
pub mod ingest;
pub mod report;
pub mod simulate;

use std::path::Path;

use mgi_core::simgrid::SimFile;
use mgi_core::telemetry::{read_frame_csv, write_frame_csv};
use mgi_core::{Series, TelemetryFrame};

use crate::CliError;

pub(crate) fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub(crate) fn read_frame(path: &Path) -> Result<TelemetryFrame, CliError> {
    let file = std::fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    read_frame_csv(std::io::BufReader::new(file)).map_err(|e| match CliError::from(e) {
        CliError::Precondition(m) | CliError::Config(m) => CliError::io(path, m),
        other => other,
    })
}

/// Simulation file from `--config`, or the built-in defaults.
pub(crate) fn load_config(path: Option<&Path>) -> Result<SimFile, CliError> {
    match path {
        Some(p) => Ok(SimFile::from_toml(&read_text(p)?)?),
        None => Ok(SimFile::default()),
    }
}

/// Step in minutes to seconds; must divide a day.
pub(crate) fn step_seconds(minutes: i64) -> Result<i64, CliError> {
    if minutes <= 0 || 1440 % minutes != 0 {
        return Err(CliError::Usage(format!("step of {minutes} min must divide a day")));
    }
    Ok(minutes * 60)
}

pub(crate) fn frame_csv(frame: &TelemetryFrame) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_frame_csv(&mut buf, frame)?;
    Ok(buf)
}

pub(crate) fn series_csv(series: &Series) -> Result<Vec<u8>, CliError> {
    let frame =
        TelemetryFrame::new([series.clone()], mgi_core::telemetry::PeriodLabel::Custom(String::new()))?;
    frame_csv(&frame)
}

/// Pretty JSON on stdout. A closed pipe is not an error.
pub(crate) fn print_json<T: serde::Serialize>(value: &T) -> Result<(), CliError> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(e.to_string())),
        _ => Ok(()),
    }
}
