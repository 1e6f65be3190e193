//! Multi-channel microgrid telemetry: data model, CSV ingestion, cleaning,
//! resampling onto a uniform grid, and period slicing.

mod clean;
mod csv_io;
mod resample;

pub use clean::{clean, CleanPolicy, CleanReport, Defect, DefectKind, RangeLimits};
pub use csv_io::{
    parse_csv, read_frame_csv, write_frame_csv, write_records_csv, Cell, Field, RawRecord, Schema,
};
pub use resample::{resample, resample_frame, GapFill, ResampleStats};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::time::Timestamp;

/// Default grid step: 10 minutes, so one day is 144 samples.
pub const DEFAULT_STEP_SECONDS: i64 = 600;

#[derive(Debug, thiserror::Error)]
pub enum TelemetryError {
    #[error("unreadable input: {0}")]
    Io(String),
    #[error("timestamp column {0:?} not found in header")]
    MissingTimestampColumn(String),
    #[error("schema references column {0:?} which is not in the header")]
    MissingColumn(String),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("no records to resample")]
    EmptyRecords,
    #[error("timestamps not strictly increasing at row {row}")]
    NonMonotone { row: usize },
    #[error("step must be positive, got {0} s")]
    InvalidStep(i64),
    #[error("series has no samples")]
    EmptySeries,
    #[error("{channel} sample {index} has invalid value {value}")]
    InvalidValue { channel: Channel, index: usize, value: f64 },
    #[error("series are not aligned: {0}")]
    Misaligned(String),
    #[error("requested range does not overlap the frame")]
    EmptyOverlap,
    #[error("range start must precede range end")]
    InvalidRange,
    #[error("frame has no {0} channel")]
    MissingChannel(Channel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    #[serde(alias = "ghi")]
    Irradiance,
    #[serde(alias = "wind")]
    WindSpeed,
    #[serde(alias = "load")]
    LoadPower,
    #[serde(alias = "voltage")]
    DcVoltage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "W/m2")]
    WattPerSquareMetre,
    #[serde(rename = "m/s")]
    MetrePerSecond,
    #[serde(rename = "kW")]
    Kilowatt,
    #[serde(rename = "V")]
    Volt,
}

impl Channel {
    pub const ALL: [Channel; 4] =
        [Channel::Irradiance, Channel::WindSpeed, Channel::LoadPower, Channel::DcVoltage];

    pub fn unit(self) -> Unit {
        match self {
            Channel::Irradiance => Unit::WattPerSquareMetre,
            Channel::WindSpeed => Unit::MetrePerSecond,
            Channel::LoadPower => Unit::Kilowatt,
            Channel::DcVoltage => Unit::Volt,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Irradiance => "irradiance",
            Channel::WindSpeed => "wind_speed",
            Channel::LoadPower => "load_power",
            Channel::DcVoltage => "dc_voltage",
        }
    }

    /// Whether a measured value is physically admissible for this channel.
    pub fn admits(self, v: f64) -> bool {
        v.is_finite()
            && match self {
                Channel::DcVoltage => v > 0.0,
                _ => v >= 0.0,
            }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = TelemetryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "irradiance" | "ghi" => Ok(Channel::Irradiance),
            "wind_speed" | "wind" => Ok(Channel::WindSpeed),
            "load_power" | "load" => Ok(Channel::LoadPower),
            "dc_voltage" | "voltage" => Ok(Channel::DcVoltage),
            other => Err(TelemetryError::Schema(format!("unknown channel {other:?}"))),
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::WattPerSquareMetre => "W/m2",
            Unit::MetrePerSecond => "m/s",
            Unit::Kilowatt => "kW",
            Unit::Volt => "V",
        })
    }
}

/// One uniformly sampled channel. Sample `i` sits at `start + i * step`;
/// `None` marks a gap.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    channel: Channel,
    start: Timestamp,
    step: i64,
    values: Vec<Option<f64>>,
}

impl Series {
    /// Builds a measured series, enforcing the channel's sign constraint.
    pub fn new(
        channel: Channel,
        start: Timestamp,
        step: i64,
        values: Vec<Option<f64>>,
    ) -> Result<Self, TelemetryError> {
        Self::check_shape(step, &values)?;
        if let Some((index, value)) =
            values.iter().enumerate().find_map(|(i, v)| v.filter(|x| !channel.admits(*x)).map(|x| (i, x)))
        {
            return Err(TelemetryError::InvalidValue { channel, index, value });
        }
        Ok(Self { channel, start, step, values })
    }

    pub fn from_dense(
        channel: Channel,
        start: Timestamp,
        step: i64,
        values: Vec<f64>,
    ) -> Result<Self, TelemetryError> {
        Self::new(channel, start, step, values.into_iter().map(Some).collect())
    }

    /// Builds a series of deviations in the channel's units (e.g. a
    /// seasonally adjusted residual). Only finiteness is enforced.
    pub fn deviations(
        channel: Channel,
        start: Timestamp,
        step: i64,
        values: Vec<Option<f64>>,
    ) -> Result<Self, TelemetryError> {
        Self::check_shape(step, &values)?;
        if let Some((index, value)) =
            values.iter().enumerate().find_map(|(i, v)| v.filter(|x| !x.is_finite()).map(|x| (i, x)))
        {
            return Err(TelemetryError::InvalidValue { channel, index, value });
        }
        Ok(Self { channel, start, step, values })
    }

    fn check_shape(step: i64, values: &[Option<f64>]) -> Result<(), TelemetryError> {
        if step <= 0 {
            return Err(TelemetryError::InvalidStep(step));
        }
        if values.is_empty() {
            return Err(TelemetryError::EmptySeries);
        }
        Ok(())
    }

    pub fn channel(&self) -> Channel {
        self.channel
    }

    pub fn start(&self) -> Timestamp {
        self.start
    }

    pub fn step(&self) -> i64 {
        self.step
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn timestamp(&self, i: usize) -> Timestamp {
        self.start.plus_seconds(i as i64 * self.step)
    }

    /// Exclusive end of the covered interval: `start + len * step`.
    pub fn end(&self) -> Timestamp {
        self.timestamp(self.values.len())
    }

    pub fn span_seconds(&self) -> i64 {
        self.values.len() as i64 * self.step
    }

    pub fn gap_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    pub fn has_gaps(&self) -> bool {
        self.values.iter().any(Option::is_none)
    }

    /// Gap-free values, or `None` when any sample is missing.
    pub fn dense(&self) -> Option<Vec<f64>> {
        self.values.iter().copied().collect()
    }

    /// `(index, value)` for every present sample.
    pub fn present(&self) -> impl Iterator<Item = (usize, f64)> + Clone + '_ {
        self.values.iter().enumerate().filter_map(|(i, v)| v.map(|x| (i, x)))
    }

    /// Index of the sample covering `t`, if inside the series.
    pub fn index_of(&self, t: Timestamp) -> Option<usize> {
        let offset = t.seconds() - self.start.seconds();
        if offset < 0 {
            return None;
        }
        let i = (offset / self.step) as usize;
        (i < self.values.len()).then_some(i)
    }

    /// Samples whose timestamps fall in `[from, to)`, with the timestamp of the first.
    pub fn window(&self, from: Timestamp, to: Timestamp) -> (Timestamp, &[Option<f64>]) {
        let (i0, i1) = self.index_range(from, to);
        (self.timestamp(i0), &self.values[i0..i1])
    }

    fn index_range(&self, from: Timestamp, to: Timestamp) -> (usize, usize) {
        let n = self.values.len() as i64;
        let ceil_idx = |t: Timestamp| {
            let off = t.seconds() - self.start.seconds();
            (off + self.step - 1).div_euclid(self.step).clamp(0, n) as usize
        };
        let i0 = ceil_idx(from);
        let i1 = ceil_idx(to).max(i0);
        (i0, i1)
    }

    /// Same grid, new values, same sign rules.
    pub fn with_values(&self, values: Vec<Option<f64>>) -> Result<Self, TelemetryError> {
        Self::new(self.channel, self.start, self.step, values)
    }

    pub(crate) fn slice_indices(&self, i0: usize, i1: usize) -> Self {
        Self {
            channel: self.channel,
            start: self.timestamp(i0),
            step: self.step,
            values: self.values[i0..i1].to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PeriodLabel {
    /// December 2018 to June 2019.
    P1_2018_2019,
    /// October 2020 to February 2021.
    P2_2020_2021,
    Custom(String),
}

impl PeriodLabel {
    /// Picks the collection period that fully contains `[start, end)`.
    pub fn infer(start: Timestamp, end: Timestamp) -> Self {
        let p1 =
            (Timestamp::from_ymd_hms(2018, 12, 1, 0, 0, 0), Timestamp::from_ymd_hms(2019, 7, 1, 0, 0, 0));
        let p2 =
            (Timestamp::from_ymd_hms(2020, 10, 1, 0, 0, 0), Timestamp::from_ymd_hms(2021, 3, 1, 0, 0, 0));
        if start >= p1.0 && end <= p1.1 {
            PeriodLabel::P1_2018_2019
        } else if start >= p2.0 && end <= p2.1 {
            PeriodLabel::P2_2020_2021
        } else {
            PeriodLabel::Custom(format!("{}..{}", start.date_string(), end.date_string()))
        }
    }
}

/// Time-aligned channels covering one collection period.
#[derive(Debug, Clone, PartialEq)]
pub struct TelemetryFrame {
    series: BTreeMap<Channel, Series>,
    period: PeriodLabel,
}

impl TelemetryFrame {
    pub fn new(
        series: impl IntoIterator<Item = Series>,
        period: PeriodLabel,
    ) -> Result<Self, TelemetryError> {
        let mut map = BTreeMap::new();
        for s in series {
            if let Some(first) = map.values().next() {
                let first: &Series = first;
                if first.start != s.start || first.step != s.step || first.len() != s.len() {
                    return Err(TelemetryError::Misaligned(format!(
                        "{} ({} x {} s from {}) vs {} ({} x {} s from {})",
                        first.channel,
                        first.len(),
                        first.step,
                        first.start,
                        s.channel,
                        s.len(),
                        s.step,
                        s.start
                    )));
                }
            }
            if map.insert(s.channel, s).is_some() {
                return Err(TelemetryError::Misaligned("duplicate channel".into()));
            }
        }
        if map.is_empty() {
            return Err(TelemetryError::EmptySeries);
        }
        Ok(Self { series: map, period })
    }

    pub fn period(&self) -> &PeriodLabel {
        &self.period
    }

    pub fn get(&self, channel: Channel) -> Option<&Series> {
        self.series.get(&channel)
    }

    pub fn require(&self, channel: Channel) -> Result<&Series, TelemetryError> {
        self.get(channel).ok_or(TelemetryError::MissingChannel(channel))
    }

    pub fn channels(&self) -> impl Iterator<Item = Channel> + '_ {
        self.series.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Series> {
        self.series.values()
    }

    fn first(&self) -> &Series {
        self.series.values().next().expect("frame is never empty")
    }

    pub fn start(&self) -> Timestamp {
        self.first().start
    }

    pub fn end(&self) -> Timestamp {
        self.first().end()
    }

    pub fn step(&self) -> i64 {
        self.first().step
    }

    pub fn len(&self) -> usize {
        self.first().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Restricts every channel to samples in `[from, to)`.
    pub fn slice_period(&self, from: Timestamp, to: Timestamp) -> Result<Self, TelemetryError> {
        if from >= to {
            return Err(TelemetryError::InvalidRange);
        }
        let (i0, i1) = self.first().index_range(from, to);
        if i0 >= i1 {
            return Err(TelemetryError::EmptyOverlap);
        }
        Ok(Self {
            series: self.series.iter().map(|(c, s)| (*c, s.slice_indices(i0, i1))).collect(),
            period: self.period.clone(),
        })
    }
}

/// Free-function form of [`TelemetryFrame::slice_period`].
pub fn slice_period(
    frame: &TelemetryFrame,
    from: Timestamp,
    to: Timestamp,
) -> Result<TelemetryFrame, TelemetryError> {
    frame.slice_period(from, to)
}
