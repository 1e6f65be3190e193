use mgi_core::telemetry::{clean, parse_csv, resample_frame, CleanPolicy, GapFill, RangeLimits, Schema};

use super::{frame_csv, read_text, step_seconds};
use crate::args::IngestArgs;
use crate::manifest::{OutputDir, RunManifest};
use crate::CliError;

pub fn run(args: &IngestArgs) -> Result<(), CliError> {
    let step = step_seconds(args.step)?;
    let fill: GapFill =
        args.fill.parse().map_err(|e: mgi_core::telemetry::TelemetryError| CliError::Usage(e.to_string()))?;
    let schema = Schema::from_toml(&read_text(&args.schema)?)?;
    let bytes = std::fs::read(&args.input).map_err(|e| CliError::io(&args.input, e))?;
    let records = parse_csv(bytes.as_slice(), &schema)?;
    let policy = if args.drop_rows { CleanPolicy::DropRow } else { CleanPolicy::NullifyCell };
    let (cleaned, report) = clean(&records, policy, &RangeLimits::default());
    log::info!(
        "{} rows, {} dropped, {} cells blanked",
        report.rows_total,
        report.rows_dropped,
        report.cells_nullified
    );
    let (frame, stats) = resample_frame(&cleaned, step, fill, None)?;

    let mut manifest = RunManifest::new("ingest");
    manifest.config_path = Some(args.schema.clone());
    manifest.inputs.push(args.input.clone());
    let mut out = OutputDir::create(&args.out_dir, manifest)?;
    out.write("frame.csv", frame_csv(&frame)?)?;
    out.write_json("clean_report.json", &report)?;
    out.write_json("resample_stats.json", &stats)?;
    out.finish()?;

    super::print_json(&report)
}
