use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::csv_io::RawRecord;
use super::{Channel, PeriodLabel, Series, TelemetryError, TelemetryFrame};
use crate::time::Timestamp;

/// How to treat runs of missing grid samples. `max_len` is in samples; runs
/// longer than that are left missing in full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapFill {
    HoldLast { max_len: usize },
    Linear { max_len: usize },
    LeaveGap,
}

impl fmt::Display for GapFill {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GapFill::HoldLast { max_len } => write!(f, "hold:{max_len}"),
            GapFill::Linear { max_len } => write!(f, "linear:{max_len}"),
            GapFill::LeaveGap => f.write_str("none"),
        }
    }
}

impl FromStr for GapFill {
    type Err = TelemetryError;

    /// Accepts `none`, `hold:<n>` or `linear:<n>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TelemetryError::Schema(format!("unknown gap fill {s:?}"));
        if s == "none" {
            return Ok(GapFill::LeaveGap);
        }
        let (kind, n) = s.split_once(':').ok_or_else(bad)?;
        let max_len = n.parse().map_err(|_| bad())?;
        match kind {
            "hold" => Ok(GapFill::HoldLast { max_len }),
            "linear" => Ok(GapFill::Linear { max_len }),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ResampleStats {
    /// Grid samples that received a value from at least one record.
    pub observed: usize,
    /// Grid samples synthesised by the gap-fill rule.
    pub filled: usize,
    /// Grid samples still missing.
    pub gaps: usize,
}

struct Grid {
    origin: i64,
    len: usize,
}

fn grid_for(records: &[RawRecord], step: i64) -> Result<Grid, TelemetryError> {
    if step <= 0 {
        return Err(TelemetryError::InvalidStep(step));
    }
    let mut prev: Option<Timestamp> = None;
    let mut first = None;
    for r in records {
        let Some(t) = r.timestamp else { continue };
        if let Some(p) = prev {
            if t <= p {
                return Err(TelemetryError::NonMonotone { row: r.row });
            }
        }
        first.get_or_insert(t);
        prev = Some(t);
    }
    let (Some(first), Some(last)) = (first, prev) else {
        return Err(TelemetryError::EmptyRecords);
    };
    let origin = first.seconds().div_euclid(step) * step;
    let last_bin = last.seconds().div_euclid(step) * step;
    Ok(Grid { origin, len: ((last_bin - origin) / step) as usize + 1 })
}

fn bin_channel(records: &[RawRecord], channel: Channel, grid: &Grid, step: i64) -> Vec<Option<f64>> {
    let mut sums = vec![(0.0_f64, 0_u32); grid.len];
    for r in records {
        let (Some(t), Some(v)) = (r.timestamp, r.get(channel).and_then(|c| c.value())) else {
            continue;
        };
        let bin = ((t.seconds() - grid.origin) / step) as usize;
        sums[bin].0 += v;
        sums[bin].1 += 1;
    }
    sums.into_iter().map(|(s, n)| (n > 0).then(|| if n == 1 { s } else { s / n as f64 })).collect()
}

fn fill_gaps(values: &mut [Option<f64>], fill: GapFill) -> usize {
    let max_len = match fill {
        GapFill::LeaveGap => return 0,
        GapFill::HoldLast { max_len } | GapFill::Linear { max_len } => max_len,
    };
    let mut filled = 0;
    let mut i = 0;
    while i < values.len() {
        if values[i].is_some() {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < values.len() && values[i].is_none() {
            i += 1;
        }
        let len = i - run_start;
        let before = run_start.checked_sub(1).and_then(|j| values[j]);
        let after = values.get(i).copied().flatten();
        if len > max_len {
            continue;
        }
        match (fill, before, after) {
            (GapFill::HoldLast { .. }, Some(b), _) => {
                values[run_start..i].iter_mut().for_each(|v| *v = Some(b));
                filled += len;
            }
            (GapFill::Linear { .. }, Some(b), Some(a)) => {
                for (k, v) in values[run_start..i].iter_mut().enumerate() {
                    let frac = (k + 1) as f64 / (len + 1) as f64;
                    *v = Some(b + (a - b) * frac);
                }
                filled += len;
            }
            _ => {}
        }
    }
    filled
}

fn build(
    records: &[RawRecord],
    channel: Channel,
    grid: &Grid,
    step: i64,
    fill: GapFill,
) -> Result<(Series, ResampleStats), TelemetryError> {
    let mut values = bin_channel(records, channel, grid, step);
    let observed = values.iter().filter(|v| v.is_some()).count();
    let filled = fill_gaps(&mut values, fill);
    let gaps = values.len() - observed - filled;
    let series = Series::new(channel, Timestamp(grid.origin), step, values)?;
    Ok((series, ResampleStats { observed, filled, gaps }))
}

/// Puts one channel of time-sorted records onto a uniform grid.
///
/// The grid starts at the first record's timestamp floored to a multiple of
/// `step` (epoch-aligned) and ends at the bin of the last record. Several
/// records in one bin are averaged.
pub fn resample(
    records: &[RawRecord],
    channel: Channel,
    step: i64,
    fill: GapFill,
) -> Result<(Series, ResampleStats), TelemetryError> {
    let grid = grid_for(records, step)?;
    build(records, channel, &grid, step, fill)
}

/// Resamples every channel found in the records onto one shared grid.
/// The period label is inferred from the covered dates unless given.
pub fn resample_frame(
    records: &[RawRecord],
    step: i64,
    fill: GapFill,
    period: Option<PeriodLabel>,
) -> Result<(TelemetryFrame, BTreeMap<Channel, ResampleStats>), TelemetryError> {
    let grid = grid_for(records, step)?;
    let channels: Vec<Channel> =
        records.first().map(|r| r.fields.iter().map(|f| f.channel).collect()).unwrap_or_default();
    let mut series = Vec::with_capacity(channels.len());
    let mut stats = BTreeMap::new();
    for ch in channels {
        let (s, st) = build(records, ch, &grid, step, fill)?;
        series.push(s);
        stats.insert(ch, st);
    }
    let start = Timestamp(grid.origin);
    let end = start.plus_seconds(grid.len as i64 * step);
    let period = period.unwrap_or_else(|| PeriodLabel::infer(start, end));
    Ok((TelemetryFrame::new(series, period)?, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::telemetry::{Cell, Field};

    fn recs(samples: &[(i64, Option<f64>)]) -> Vec<RawRecord> {
        samples
            .iter()
            .enumerate()
            .map(|(row, (t, v))| RawRecord {
                row,
                timestamp: Some(Timestamp(*t)),
                timestamp_raw: String::new(),
                fields: vec![Field {
                    column: "load_power".into(),
                    channel: Channel::LoadPower,
                    cell: v.map_or(Cell::Empty, Cell::Value),
                }],
            })
            .collect()
    }

    #[test]
    fn uniform_input_is_unchanged() {
        let input: Vec<_> = (0..6).map(|i| (i * 600, Some(0.5 + i as f64 * 0.1))).collect();
        let (s, st) = resample(&recs(&input), Channel::LoadPower, 600, GapFill::LeaveGap).unwrap();
        let expect: Vec<_> = input.iter().map(|(_, v)| *v).collect();
        assert_eq!(s.values(), expect.as_slice());
        assert_eq!(s.start(), Timestamp(0));
        assert_eq!(st, ResampleStats { observed: 6, filled: 0, gaps: 0 });
    }

    #[test]
    fn linear_fill_midpoint() {
        let r = recs(&[(0, Some(1.0)), (1200, Some(2.0))]);
        let (s, st) = resample(&r, Channel::LoadPower, 600, GapFill::Linear { max_len: 2 }).unwrap();
        assert_eq!(s.values(), &[Some(1.0), Some(1.5), Some(2.0)]);
        assert_eq!(st.filled, 1);
    }

    #[test]
    fn long_hole_stays_missing() {
        // 3 h hole on a 10 min grid = 17 missing samples between 0 and 3 h
        let r = recs(&[(0, Some(1.0)), (3 * 3600, Some(2.0))]);
        for fill in [GapFill::Linear { max_len: 2 }, GapFill::HoldLast { max_len: 2 }] {
            let (s, st) = resample(&r, Channel::LoadPower, 600, fill).unwrap();
            assert_eq!(s.len(), 19);
            assert!(s.values()[1..18].iter().all(Option::is_none));
            assert_eq!(st.filled, 0);
            assert_eq!(st.gaps, 17);
        }
    }

    #[test]
    fn hold_last_fills_short_gap() {
        let r = recs(&[(0, Some(1.0)), (600, None), (1200, None), (1800, Some(4.0))]);
        let (s, _) = resample(&r, Channel::LoadPower, 600, GapFill::HoldLast { max_len: 2 }).unwrap();
        assert_eq!(s.values(), &[Some(1.0), Some(1.0), Some(1.0), Some(4.0)]);
    }

    #[test]
    fn downsampling_averages() {
        let r = recs(&[(0, Some(1.0)), (300, Some(3.0)), (600, Some(5.0))]);
        let (s, _) = resample(&r, Channel::LoadPower, 600, GapFill::LeaveGap).unwrap();
        assert_eq!(s.values(), &[Some(2.0), Some(5.0)]);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            resample(&[], Channel::LoadPower, 600, GapFill::LeaveGap),
            Err(TelemetryError::EmptyRecords)
        ));
        let r = recs(&[(600, Some(1.0)), (0, Some(1.0))]);
        assert!(matches!(
            resample(&r, Channel::LoadPower, 600, GapFill::LeaveGap),
            Err(TelemetryError::NonMonotone { row: 1 })
        ));
        let r = recs(&[(0, Some(1.0))]);
        assert!(matches!(
            resample(&r, Channel::LoadPower, 0, GapFill::LeaveGap),
            Err(TelemetryError::InvalidStep(0))
        ));
    }

    #[test]
    fn gap_fill_parses() {
        assert_eq!("linear:3".parse::<GapFill>().unwrap(), GapFill::Linear { max_len: 3 });
        assert_eq!("hold:1".parse::<GapFill>().unwrap(), GapFill::HoldLast { max_len: 1 });
        assert_eq!("none".parse::<GapFill>().unwrap(), GapFill::LeaveGap);
        assert!("spline:2".parse::<GapFill>().is_err());
    }
}
