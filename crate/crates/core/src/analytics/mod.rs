//! Descriptive analytics over telemetry channels: typical-day profiles,
//! seasonal adjustment, yearly load trend, anomaly search and correlation
//! between channels.

mod anomaly;
mod correlation;
mod profile;
mod trend;

pub use anomaly::{detect_anomalies, Anomaly, AnomalyKind, Baseline};
pub use correlation::{
    correlate, cross_correlation, daily_peak_offset, hourly_mean, pearson, CorrelationOptions,
    CorrelationReport, LagResult,
};
pub use profile::{seasonal_adjust, typical_day, weekly_profile, DailyProfile};
pub use trend::{growth_pct, trend, TrendConfig, TrendReport, YearSummary};

use crate::telemetry::{Channel, TelemetryError};

#[derive(Debug, thiserror::Error)]
pub enum AnalyticsError {
    #[error("series has no present samples")]
    EmptySeries,
    #[error("grid step {0} s does not divide a day")]
    StepNotDivisor(i64),
    #[error("series spans {have_s} s, need at least {need_days} day(s)")]
    InsufficientSpan { need_days: i64, have_s: i64 },
    #[error("trend needs at least two calendar years, found {0}")]
    SingleYear(usize),
    #[error("expected channel {expected}, got {got}")]
    WrongChannel { expected: Channel, got: Channel },
    #[error("zero variance")]
    ZeroVariance,
    #[error("only {0} mutually present samples, need at least 3")]
    InsufficientOverlap(usize),
    #[error("series are not on the same grid")]
    Misaligned,
    #[error("max lag of {max_lag} steps must be below half the series length {len}")]
    LagTooLong { max_lag: usize, len: usize },
    #[error("no day with data in both series")]
    NoCompleteDay,
    #[error(transparent)]
    Telemetry(#[from] TelemetryError),
}

fn slots_per_day(step: i64) -> Result<usize, AnalyticsError> {
    if step <= 0 || crate::time::SECONDS_PER_DAY % step != 0 {
        return Err(AnalyticsError::StepNotDivisor(step));
    }
    Ok((crate::time::SECONDS_PER_DAY / step) as usize)
}
