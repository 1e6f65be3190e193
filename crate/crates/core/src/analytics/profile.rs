use serde::{Deserialize, Serialize};

use super::{slots_per_day, AnalyticsError};
use crate::telemetry::{Channel, Series};
use crate::time::{Timestamp, SECONDS_PER_DAY};

/// Per-time-of-day statistics. Slot `s` covers `[s * step, (s + 1) * step)`
/// seconds after midnight; `None` where the slot has no data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyProfile {
    pub channel: Channel,
    pub step_s: i64,
    pub slot_means: Vec<Option<f64>>,
    pub slot_counts: Vec<usize>,
    /// Population standard deviation.
    pub slot_stddev: Vec<Option<f64>>,
}

impl DailyProfile {
    pub fn slot_of(&self, t: Timestamp) -> usize {
        (t.second_of_day() / self.step_s) as usize
    }

    /// Mean over the slots whose start hour is in `[from_hour, to_hour)`.
    pub fn mean_between(&self, from_hour: f64, to_hour: f64) -> Option<f64> {
        let vals: Vec<f64> = self
            .slot_means
            .iter()
            .enumerate()
            .filter(|(s, _)| {
                let h = (*s as i64 * self.step_s) as f64 / 3600.0;
                h >= from_hour && h < to_hour
            })
            .filter_map(|(_, m)| *m)
            .collect();
        (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
    }

    /// `slot_time,mean,stddev,count`, blank cells for empty slots.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("slot_time,mean,stddev,count\n");
        for s in 0..self.slot_means.len() {
            let secs = s as i64 * self.step_s;
            let fmt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{:02}:{:02},{},{},{}\n",
                secs / 3600,
                (secs % 3600) / 60,
                fmt(self.slot_means[s]),
                fmt(self.slot_stddev[s]),
                self.slot_counts[s]
            ));
        }
        out
    }
}

fn profile_of<'a>(
    series: &Series,
    samples: impl Iterator<Item = (usize, f64)> + Clone + 'a,
) -> Result<DailyProfile, AnalyticsError> {
    let slots = slots_per_day(series.step())?;
    let slot = |i: usize| (series.timestamp(i).second_of_day() / series.step()) as usize;
    let mut sums = vec![0.0; slots];
    let mut counts = vec![0usize; slots];
    for (i, v) in samples.clone() {
        sums[slot(i)] += v;
        counts[slot(i)] += 1;
    }
    let means: Vec<Option<f64>> =
        sums.iter().zip(&counts).map(|(s, n)| (*n > 0).then(|| s / *n as f64)).collect();
    let mut sq = vec![0.0; slots];
    for (i, v) in samples {
        let d = v - means[slot(i)].expect("slot has a sample");
        sq[slot(i)] += d * d;
    }
    let stddev = sq.iter().zip(&counts).map(|(s, n)| (*n > 0).then(|| (s / *n as f64).sqrt())).collect();
    Ok(DailyProfile {
        channel: series.channel(),
        step_s: series.step(),
        slot_means: means,
        slot_counts: counts,
        slot_stddev: stddev,
    })
}

/// Mean and spread of the channel at each time of day across all days.
pub fn typical_day(series: &Series) -> Result<DailyProfile, AnalyticsError> {
    slots_per_day(series.step())?;
    if series.span_seconds() < SECONDS_PER_DAY {
        return Err(AnalyticsError::InsufficientSpan { need_days: 1, have_s: series.span_seconds() });
    }
    if series.present().next().is_none() {
        return Err(AnalyticsError::EmptySeries);
    }
    profile_of(series, series.present())
}

/// Seven profiles, Monday first, grouping days by weekday.
pub fn weekly_profile(series: &Series) -> Result<Vec<DailyProfile>, AnalyticsError> {
    if series.present().next().is_none() {
        return Err(AnalyticsError::EmptySeries);
    }
    (0..7)
        .map(|wd| {
            profile_of(series, series.present().filter(move |(i, _)| series.timestamp(*i).weekday() == wd))
        })
        .collect()
}

/// Subtracts the typical-day profile from every present sample.
pub fn seasonal_adjust(series: &Series) -> Result<Series, AnalyticsError> {
    if series.span_seconds() < 2 * SECONDS_PER_DAY {
        return Err(AnalyticsError::InsufficientSpan { need_days: 2, have_s: series.span_seconds() });
    }
    let profile = typical_day(series)?;
    let values = series
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.map(|x| x - profile.slot_means[profile.slot_of(series.timestamp(i))].expect("present slot"))
        })
        .collect();
    Ok(Series::deviations(series.channel(), series.start(), series.step(), values)?)
}
