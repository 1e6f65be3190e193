//! Timestamps on the local standard-time axis of the site.
//!
//! Timestamps carry no timezone and no DST. Internally they are whole seconds
//! since 1970-01-01T00:00:00, so hour-of-day and calendar dates fall straight
//! out of integer arithmetic.

use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Datelike, NaiveDate, NaiveDateTime, Timelike};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SECONDS_PER_HOUR: i64 = 3_600;
pub const SECONDS_PER_DAY: i64 = 86_400;

/// Canonical text form used in every file this crate writes.
pub const ISO_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Timestamp(pub i64);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse timestamp {input:?} with format {format:?}")]
pub struct TimestampParseError {
    pub input: String,
    pub format: String,
}

impl Timestamp {
    pub fn from_ymd_hms(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> Self {
        let dt = NaiveDate::from_ymd_opt(y, mo, d)
            .and_then(|date| date.and_hms_opt(h, mi, s))
            .expect("valid calendar date");
        Self(dt.and_utc().timestamp())
    }

    pub fn parse_with(text: &str, format: &str) -> Result<Self, TimestampParseError> {
        NaiveDateTime::parse_from_str(text.trim(), format)
            .map(|dt| Self(dt.and_utc().timestamp()))
            .map_err(|_| TimestampParseError { input: text.to_string(), format: format.to_string() })
    }

    pub fn seconds(self) -> i64 {
        self.0
    }

    pub fn plus_seconds(self, s: i64) -> Self {
        Self(self.0 + s)
    }

    fn naive(self) -> NaiveDateTime {
        DateTime::from_timestamp(self.0, 0).expect("timestamp in chrono range").naive_utc()
    }

    /// Seconds elapsed since local midnight.
    pub fn second_of_day(self) -> i64 {
        self.0.rem_euclid(SECONDS_PER_DAY)
    }

    pub fn hour_of_day(self) -> usize {
        (self.second_of_day() / SECONDS_PER_HOUR) as usize
    }

    /// Days since 1970-01-01 (floor division, so negative epochs still bucket correctly).
    pub fn day_index(self) -> i64 {
        self.0.div_euclid(SECONDS_PER_DAY)
    }

    pub fn year(self) -> i32 {
        self.naive().year()
    }

    /// 0 = Monday .. 6 = Sunday.
    pub fn weekday(self) -> usize {
        self.naive().weekday().num_days_from_monday() as usize
    }

    pub fn date_string(self) -> String {
        self.naive().format("%Y-%m-%d").to_string()
    }

    /// Fractional hour of day, e.g. 13.5 for 13:30.
    pub fn fractional_hour(self) -> f64 {
        let n = self.naive();
        n.hour() as f64 + n.minute() as f64 / 60.0 + n.second() as f64 / 3600.0
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.naive().format(ISO_FORMAT))
    }
}

impl FromStr for Timestamp {
    type Err = TimestampParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_with(s, ISO_FORMAT)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
