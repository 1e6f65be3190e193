use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "mgi", version, about = "Microgrid telemetry analysis and simulation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Clean and resample a raw CSV export into a telemetry frame.
    Ingest(IngestArgs),
    /// Run analyses over a telemetry frame.
    Analyze(AnalyzeArgs),
    /// Simulate a microgrid and write telemetry plus ground truth.
    Simulate(SimulateArgs),
    /// Fit harmonic models and forecast outage risk.
    Forecast(ForecastArgs),
    /// Summarise the runs found under a directory as JSON on stdout.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Raw CSV file.
    pub input: PathBuf,
    /// TOML file mapping CSV columns to channels.
    #[arg(long)]
    pub schema: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Grid step in minutes.
    #[arg(long, default_value_t = 10)]
    pub step: i64,
    /// Gap filling: `none`, `hold:<n>` or `linear:<n>` (n in samples).
    #[arg(long, default_value = "linear:6")]
    pub fill: String,
    /// Drop rows with any defect instead of blanking the cell.
    #[arg(long)]
    pub drop_rows: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Frame CSV written by `ingest` or `simulate`.
    pub frame: PathBuf,
    /// Comma-separated list; all analyses when omitted.
    #[arg(long)]
    pub analyses: Option<String>,
    /// Simulation config whose battery thresholds drive outage detection.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 30)]
    pub days: usize,
    /// Overrides the config step, minutes.
    #[arg(long)]
    pub step: Option<i64>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ForecastArgs {
    pub frame: PathBuf,
    /// Hours ahead.
    #[arg(long, default_value_t = 24)]
    pub horizon: i64,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Forecast step in minutes; the frame step when omitted.
    #[arg(long)]
    pub step: Option<i64>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Directory holding one or more run outputs.
    pub dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Analysis {
    Outages,
    Spectrum,
    Acf,
    TypicalDay,
    Seasonal,
    Trend,
    Correlate,
    Anomalies,
}

impl Analysis {
    pub const ALL: [Analysis; 8] = [
        Analysis::Outages,
        Analysis::Spectrum,
        Analysis::Acf,
        Analysis::TypicalDay,
        Analysis::Seasonal,
        Analysis::Trend,
        Analysis::Correlate,
        Analysis::Anomalies,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Analysis::Outages => "outages",
            Analysis::Spectrum => "spectrum",
            Analysis::Acf => "acf",
            Analysis::TypicalDay => "typical-day",
            Analysis::Seasonal => "seasonal",
            Analysis::Trend => "trend",
            Analysis::Correlate => "correlate",
            Analysis::Anomalies => "anomalies",
        }
    }

    /// Parses a comma list, sorted and deduplicated.
    pub fn parse_list(text: &str) -> Result<Vec<Analysis>, String> {
        let mut out = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            out.push(part.parse()?);
        }
        if out.is_empty() {
            return Err("no analyses given".into());
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Analysis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Analysis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Analysis::ALL.into_iter().find(|a| a.name() == s || a.name().replace('-', "_") == s).ok_or_else(
            || {
                let known: Vec<&str> = Analysis::ALL.iter().map(|a| a.name()).collect();
                format!("unknown analysis {s:?}; expected one of {}", known.join(", "))
            },
        )
    }
}
