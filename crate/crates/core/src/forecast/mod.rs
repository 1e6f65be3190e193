//! Harmonic forecasting of resources and load, and outage-risk alerts
//! computed by running the simulator's energy balance over the forecasts.

mod harmonic;
mod risk;

pub use harmonic::{fit_harmonic, predict, HarmonicComponent, HarmonicModel, DEFAULT_PERIODS_HOURS};
pub use risk::{alerts_text, apply_shed, outage_risk, OutageAlert};

use crate::simgrid::SimError;
use crate::telemetry::TelemetryError;

#[derive(Debug, thiserror::Error)]
pub enum ForecastError {
    #[error("series has {0} missing samples; fit needs a gap-free window")]
    Gaps(usize),
    #[error("series spans {have_s} s, need at least {need_s} s")]
    TooShort { need_s: i64, have_s: i64 },
    #[error("periods must be positive and finite, got {0}")]
    InvalidPeriod(f64),
    #[error("design matrix is rank deficient (duplicate or unresolvable periods)")]
    RankDeficient,
    #[error("horizon and step must be positive")]
    EmptyHorizon,
    #[error("forecast grids differ: {0}")]
    Misaligned(String),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Telemetry(#[from] TelemetryError),
}
