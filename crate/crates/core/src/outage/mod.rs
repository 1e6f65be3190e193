//! Outage detection from battery DC voltage, outage statistics, and
//! rule-based cause attribution.
//!
//! The system disconnects its loads when the bank voltage falls below the
//! cutoff and reconnects once it has recovered to the re-arm level, so an
//! outage is a hysteresis episode on the voltage channel.

mod attribution;

pub use attribution::{attribute_cause, AttributionConfig, Cause, CauseAttribution, Evidence};

use serde::{Deserialize, Serialize};

use crate::telemetry::{Channel, Series, TelemetryError};
use crate::time::{Timestamp, SECONDS_PER_HOUR};

pub const DEFAULT_CUTOFF_V: f64 = 43.0;
pub const DEFAULT_REARM_V: f64 = 44.0;

#[derive(Debug, thiserror::Error)]
pub enum OutageError {
    #[error("expected a dc_voltage series, got {0}")]
    WrongChannel(Channel),
    #[error("invalid detector thresholds: cutoff {cutoff} V, rearm {rearm} V")]
    InvalidThresholds { cutoff: f64, rearm: f64 },
    #[error("episode {start}..{end} lies outside the analysed span")]
    EpisodeOutsideSpan { start: Timestamp, end: Timestamp },
    #[error("analysed span is empty")]
    EmptySpan,
    #[error("not enough data before {0} for the attribution lookback")]
    InsufficientLookback(Timestamp),
    #[error(transparent)]
    Telemetry(#[from] TelemetryError),
}

/// A contiguous interval during which the system was off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageEpisode {
    pub start: Timestamp,
    /// Exclusive: the first instant the system was back on (or the end of data).
    pub end: Timestamp,
    pub min_voltage: f64,
    pub duration_s: i64,
}

impl OutageEpisode {
    pub fn new(start: Timestamp, end: Timestamp, min_voltage: f64) -> Self {
        Self { start, end, min_voltage, duration_s: end.seconds() - start.seconds() }
    }

    pub fn duration_hours(&self) -> f64 {
        self.duration_s as f64 / SECONDS_PER_HOUR as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConfig {
    pub cutoff_v: f64,
    /// Voltage at which an open episode closes. Equal to `cutoff_v` disables hysteresis.
    pub rearm_v: f64,
    /// Episodes shorter than this are discarded; gaps at least this long split episodes.
    pub min_duration_s: i64,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self { cutoff_v: DEFAULT_CUTOFF_V, rearm_v: DEFAULT_REARM_V, min_duration_s: 1200 }
    }
}

struct Open {
    start: usize,
    min_v: f64,
}

/// Finds outage episodes on a DC voltage series.
///
/// Starting online, the detector goes offline at the first sample below
/// `cutoff_v` and comes back at the first sample at or above `rearm_v`.
/// A gap shorter than `min_duration_s` carries the current state through;
/// a longer gap closes any open episode at the gap's first sample and resets
/// the detector to online. Episodes shorter than `min_duration_s` are dropped.
pub fn detect_outages(voltage: &Series, config: &DetectorConfig) -> Result<Vec<OutageEpisode>, OutageError> {
    if voltage.channel() != Channel::DcVoltage {
        return Err(OutageError::WrongChannel(voltage.channel()));
    }
    let DetectorConfig { cutoff_v, rearm_v, min_duration_s } = *config;
    if !(cutoff_v.is_finite() && rearm_v.is_finite() && cutoff_v > 0.0 && rearm_v >= cutoff_v) {
        return Err(OutageError::InvalidThresholds { cutoff: cutoff_v, rearm: rearm_v });
    }
    let step = voltage.step();
    let mut episodes = Vec::new();
    let mut close = |open: Open, end_idx: usize| {
        let ep = OutageEpisode::new(voltage.timestamp(open.start), voltage.timestamp(end_idx), open.min_v);
        if ep.duration_s >= min_duration_s {
            episodes.push(ep);
        }
    };

    let mut open: Option<Open> = None;
    let mut gap_run = 0usize;
    for (i, v) in voltage.values().iter().enumerate() {
        let Some(x) = *v else {
            gap_run += 1;
            continue;
        };
        if gap_run > 0 {
            if gap_run as i64 * step >= min_duration_s {
                if let Some(o) = open.take() {
                    close(o, i - gap_run);
                }
            }
            gap_run = 0;
        }
        match open.as_mut() {
            Some(_) if x >= rearm_v => close(open.take().expect("checked"), i),
            Some(o) => o.min_v = o.min_v.min(x),
            None if x < cutoff_v => open = Some(Open { start: i, min_v: x }),
            None => {}
        }
    }
    if let Some(o) = open {
        let n = voltage.len();
        let long_tail = gap_run > 0 && gap_run as i64 * step >= min_duration_s;
        close(o, if long_tail { n - gap_run } else { n });
    }
    Ok(episodes)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutageStats {
    pub episodes: Vec<OutageEpisode>,
    /// Per hour of day, the number of episodes whose interval intersects that hour.
    pub hour_histogram: [u32; 24],
    /// Total outage duration over the analysed span duration.
    pub outage_fraction: f64,
}

impl OutageStats {
    /// `hour,count` rows for plotting.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("hour,count\n");
        for (h, c) in self.hour_histogram.iter().enumerate() {
            out.push_str(&format!("{h},{c}\n"));
        }
        out
    }

    /// Share of histogram mass falling in hours `[from_hour, to_hour)`.
    pub fn histogram_mass_share(&self, from_hour: usize, to_hour: usize) -> f64 {
        let total: u32 = self.hour_histogram.iter().sum();
        if total == 0 {
            return 0.0;
        }
        let inside: u32 = self.hour_histogram[from_hour..to_hour].iter().sum();
        inside as f64 / total as f64
    }
}

/// Aggregates episodes over the span `[start, end)`. The fraction uses the
/// whole analysed span as denominator.
pub fn outage_stats(
    episodes: &[OutageEpisode],
    span: (Timestamp, Timestamp),
) -> Result<OutageStats, OutageError> {
    let (start, end) = span;
    if end <= start {
        return Err(OutageError::EmptySpan);
    }
    let mut hist = [0u32; 24];
    let mut total = 0i64;
    for ep in episodes {
        if ep.start < start || ep.end > end || ep.end <= ep.start {
            return Err(OutageError::EpisodeOutsideSpan { start: ep.start, end: ep.end });
        }
        total += ep.duration_s;
        let mut touched = [false; 24];
        let first = ep.start.seconds().div_euclid(SECONDS_PER_HOUR);
        let last = (ep.end.seconds() - 1).div_euclid(SECONDS_PER_HOUR);
        for bucket in first..=last.min(first + 23) {
            touched[bucket.rem_euclid(24) as usize] = true;
        }
        for (h, t) in touched.iter().enumerate() {
            hist[h] += u32::from(*t);
        }
    }
    let span_s = (end.seconds() - start.seconds()) as f64;
    Ok(OutageStats {
        episodes: episodes.to_vec(),
        hour_histogram: hist,
        outage_fraction: (total as f64 / span_s).clamp(0.0, 1.0),
    })
}
