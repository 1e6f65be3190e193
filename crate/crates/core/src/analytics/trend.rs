use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::telemetry::{Channel, Series};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    /// Years with fewer days of data are reported but left out of slope and growth.
    pub min_days: usize,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self { min_days: 30 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearSummary {
    pub year: i32,
    pub days: usize,
    pub mean_kw: f64,
    pub daily_max_mean_kw: f64,
    pub included: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendReport {
    pub per_year_mean: BTreeMap<i32, f64>,
    pub per_year_daily_max_mean: BTreeMap<i32, f64>,
    pub years: Vec<YearSummary>,
    /// Least-squares slope of yearly mean load against calendar year, kW/yr.
    pub slope: Option<f64>,
    /// Change of the mean daily maximum between first and last included year.
    pub growth_pct: Option<f64>,
}

/// `100 * (last - first) / first`, undefined for a non-positive base.
pub fn growth_pct(first: f64, last: f64) -> Option<f64> {
    (first > 0.0).then(|| 100.0 * (last - first) / first)
}

fn ls_slope(points: &[(f64, f64)]) -> Option<f64> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Per calendar year: mean load and mean of the daily maxima.
pub fn trend(load: &Series, config: &TrendConfig) -> Result<TrendReport, AnalyticsError> {
    if load.channel() != Channel::LoadPower {
        return Err(AnalyticsError::WrongChannel { expected: Channel::LoadPower, got: load.channel() });
    }
    // year -> (sum, count, day -> max)
    let mut acc: BTreeMap<i32, (f64, usize, BTreeMap<i64, f64>)> = BTreeMap::new();
    for (i, v) in load.present() {
        let t = load.timestamp(i);
        let e = acc.entry(t.year()).or_default();
        e.0 += v;
        e.1 += 1;
        e.2.entry(t.day_index()).and_modify(|m| *m = m.max(v)).or_insert(v);
    }
    if acc.len() < 2 {
        return Err(AnalyticsError::SingleYear(acc.len()));
    }
    let years: Vec<YearSummary> = acc
        .iter()
        .map(|(year, (sum, n, days))| YearSummary {
            year: *year,
            days: days.len(),
            mean_kw: sum / *n as f64,
            daily_max_mean_kw: days.values().sum::<f64>() / days.len() as f64,
            included: days.len() >= config.min_days,
        })
        .collect();
    let included: Vec<&YearSummary> = years.iter().filter(|y| y.included).collect();
    let slope = ls_slope(&included.iter().map(|y| (y.year as f64, y.mean_kw)).collect::<Vec<_>>());
    let growth = match (included.first(), included.last()) {
        (Some(f), Some(l)) if included.len() >= 2 => growth_pct(f.daily_max_mean_kw, l.daily_max_mean_kw),
        _ => None,
    };
    Ok(TrendReport {
        per_year_mean: years.iter().map(|y| (y.year, y.mean_kw)).collect(),
        per_year_daily_max_mean: years.iter().map(|y| (y.year, y.daily_max_mean_kw)).collect(),
        years,
        slope,
        growth_pct: growth,
    })
}

impl TrendReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,days,mean_kw,daily_max_mean_kw,included\n");
        for y in &self.years {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                y.year, y.days, y.mean_kw, y.daily_max_mean_kw, y.included
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::time::Timestamp;

    /// Daily series (one sample per day) from `start` with `f(day)`.
    fn daily(start: Timestamp, days: usize, f: impl Fn(usize) -> f64) -> Series {
        Series::from_dense(Channel::LoadPower, start, 86_400, (0..days).map(f).collect()).unwrap()
    }

    #[test]
    fn flat_load_has_no_trend() {
        let s = daily(Timestamp::from_ymd_hms(2019, 1, 1, 0, 0, 0), 730, |_| 1.0);
        let r = trend(&s, &TrendConfig::default()).unwrap();
        assert_eq!(r.slope, Some(0.0));
        assert_eq!(r.growth_pct, Some(0.0));
    }

    #[test]
    fn growth_from_point_seven_to_one_point_two() {
        let g = growth_pct(0.7, 1.2).unwrap();
        assert!((g - 71.428_571_428_571_43).abs() < 1e-9);
    }

    #[test]
    fn slope_of_one_two_three() {
        let s = daily(Timestamp::from_ymd_hms(2019, 1, 1, 0, 0, 0), 365 + 366 + 365, |d| {
            if d < 365 {
                1.0
            } else if d < 731 {
                2.0
            } else {
                3.0
            }
        });
        let r = trend(&s, &TrendConfig::default()).unwrap();
        assert_eq!(r.per_year_mean.keys().copied().collect::<Vec<_>>(), vec![2019, 2020, 2021]);
        assert!((r.slope.unwrap() - 1.0).abs() < 1e-12);
        assert!((r.growth_pct.unwrap() - 200.0).abs() < 1e-9);
    }

    #[test]
    fn short_years_are_reported_but_excluded() {
        // 2018-12-20 .. : 12 days of 2018 at 5.0, then a year at 1.0 and a year at 2.0
        let start = Timestamp::from_ymd_hms(2018, 12, 20, 0, 0, 0);
        let s = daily(start, 12 + 365 + 366, |d| {
            if d < 12 {
                5.0
            } else if d < 377 {
                1.0
            } else {
                2.0
            }
        });
        let r = trend(&s, &TrendConfig::default()).unwrap();
        assert_eq!(r.years.len(), 3);
        assert!(!r.years[0].included);
        assert_eq!(r.per_year_mean[&2018], 5.0);
        assert!((r.growth_pct.unwrap() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn single_year_and_wrong_channel() {
        let s = daily(Timestamp::from_ymd_hms(2019, 1, 1, 0, 0, 0), 100, |_| 1.0);
        assert!(matches!(trend(&s, &TrendConfig::default()), Err(AnalyticsError::SingleYear(1))));
        let v = Series::from_dense(Channel::DcVoltage, Timestamp(0), 86_400, vec![48.0; 800]).unwrap();
        assert!(matches!(trend(&v, &TrendConfig::default()), Err(AnalyticsError::WrongChannel { .. })));
    }
}
