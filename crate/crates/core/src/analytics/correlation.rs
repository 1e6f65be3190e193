use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{slots_per_day, AnalyticsError};
use crate::telemetry::Series;
use crate::time::{Timestamp, SECONDS_PER_DAY, SECONDS_PER_HOUR};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagResult {
    pub lag_steps: i64,
    pub lag_s: i64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub pearson_r: f64,
    /// `b` is best aligned with `a` when read this many seconds later.
    pub best_lag_s: i64,
    pub r_at_best_lag: f64,
    /// Circular mean over days of (peak hour of `b` - peak hour of `a`), hours.
    pub daily_peak_offset_h: f64,
    pub hourly_averaged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationOptions {
    /// Average both series to hourly means first.
    pub hourly: bool,
    pub max_lag_s: i64,
}

impl Default for CorrelationOptions {
    fn default() -> Self {
        Self { hourly: true, max_lag_s: 6 * SECONDS_PER_HOUR }
    }
}

fn check_aligned(a: &Series, b: &Series) -> Result<(), AnalyticsError> {
    if a.start() != b.start() || a.step() != b.step() || a.len() != b.len() {
        return Err(AnalyticsError::Misaligned);
    }
    Ok(())
}

fn pearson_pairs(pairs: impl Iterator<Item = (f64, f64)> + Clone) -> Result<f64, AnalyticsError> {
    let (mut sx, mut sy, mut n) = (0.0, 0.0, 0usize);
    for (x, y) in pairs.clone() {
        sx += x;
        sy += y;
        n += 1;
    }
    if n < 3 {
        return Err(AnalyticsError::InsufficientOverlap(n));
    }
    let (mx, my) = (sx / n as f64, sy / n as f64);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in pairs {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Err(AnalyticsError::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

fn lagged_pairs<'a>(a: &'a Series, b: &'a Series, lag: i64) -> impl Iterator<Item = (f64, f64)> + Clone + 'a {
    let n = a.len() as i64;
    (0.max(-lag)..n.min(n - lag))
        .filter_map(move |i| Some((a.values()[i as usize]?, b.values()[(i + lag) as usize]?)))
}

/// Pearson product-moment correlation over mutually present samples.
pub fn pearson(a: &Series, b: &Series) -> Result<f64, AnalyticsError> {
    check_aligned(a, b)?;
    pearson_pairs(lagged_pairs(a, b, 0))
}

/// Lag (whole steps, `|lag| <= max_lag`) maximising the correlation of
/// `a(t)` with `b(t + lag)`. Ties go to the smaller `|lag|`, then to the
/// positive lag. Lags without enough overlap are skipped.
pub fn cross_correlation(a: &Series, b: &Series, max_lag: usize) -> Result<LagResult, AnalyticsError> {
    check_aligned(a, b)?;
    if 2 * max_lag >= a.len() {
        return Err(AnalyticsError::LagTooLong { max_lag, len: a.len() });
    }
    let m = max_lag as i64;
    let mut order: Vec<i64> = (-m..=m).collect();
    order.sort_by_key(|l| (l.abs(), -l));
    let mut best: Option<LagResult> = None;
    let mut last_err = None;
    for lag in order {
        match pearson_pairs(lagged_pairs(a, b, lag)) {
            Ok(r) if best.is_none_or(|bst| r > bst.r) => {
                best = Some(LagResult { lag_steps: lag, lag_s: lag * a.step(), r });
            }
            Ok(_) => {}
            Err(e) => last_err = Some(e),
        }
    }
    best.ok_or_else(|| last_err.unwrap_or(AnalyticsError::InsufficientOverlap(0)))
}

/// Circular mean over days of the difference between the time-of-day at
/// which `b` and `a` peak, in hours within (-12, 12]. Days without data in
/// either series are skipped.
pub fn daily_peak_offset(a: &Series, b: &Series) -> Result<f64, AnalyticsError> {
    check_aligned(a, b)?;
    slots_per_day(a.step())?;
    if a.span_seconds() < 2 * SECONDS_PER_DAY {
        return Err(AnalyticsError::InsufficientSpan { need_days: 2, have_s: a.span_seconds() });
    }
    let first_day = a.start().day_index();
    let last_day = Timestamp(a.end().seconds() - 1).day_index();
    let (mut sx, mut sy, mut days) = (0.0, 0.0, 0usize);
    for day in first_day..=last_day {
        let from = Timestamp(day * SECONDS_PER_DAY);
        let to = Timestamp((day + 1) * SECONDS_PER_DAY);
        let peak_hour = |s: &Series| -> Option<f64> {
            let (t0, w) = s.window(from, to);
            let mut best: Option<(usize, f64)> = None;
            for (i, v) in w.iter().enumerate() {
                if let Some(x) = *v {
                    if best.is_none_or(|(_, b)| x > b) {
                        best = Some((i, x));
                    }
                }
            }
            best.map(|(i, _)| t0.plus_seconds(i as i64 * s.step()).fractional_hour())
        };
        if let (Some(ha), Some(hb)) = (peak_hour(a), peak_hour(b)) {
            let angle = 2.0 * PI * (hb - ha) / 24.0;
            sx += angle.cos();
            sy += angle.sin();
            days += 1;
        }
    }
    if days == 0 {
        return Err(AnalyticsError::NoCompleteDay);
    }
    let mut h = sy.atan2(sx) * 24.0 / (2.0 * PI);
    if h <= -12.0 {
        h += 24.0;
    }
    Ok(h)
}

/// Hourly means on an hour-aligned grid; missing hours stay missing.
pub fn hourly_mean(series: &Series) -> Result<Series, AnalyticsError> {
    let step = series.step();
    if step >= SECONDS_PER_HOUR || SECONDS_PER_HOUR % step != 0 {
        return Ok(series.clone());
    }
    let origin = series.start().seconds().div_euclid(SECONDS_PER_HOUR) * SECONDS_PER_HOUR;
    let last = (series.end().seconds() - 1).div_euclid(SECONDS_PER_HOUR) * SECONDS_PER_HOUR;
    let n = ((last - origin) / SECONDS_PER_HOUR + 1) as usize;
    let mut acc = vec![(0.0, 0usize); n];
    for (i, v) in series.present() {
        let h = ((series.timestamp(i).seconds() - origin) / SECONDS_PER_HOUR) as usize;
        acc[h].0 += v;
        acc[h].1 += 1;
    }
    let values = acc.into_iter().map(|(s, c)| (c > 0).then(|| s / c as f64)).collect();
    Ok(Series::deviations(series.channel(), Timestamp(origin), SECONDS_PER_HOUR, values)?)
}

/// Pearson, best lag and daily peak offset of `b` relative to `a`.
pub fn correlate(
    a: &Series,
    b: &Series,
    options: &CorrelationOptions,
) -> Result<CorrelationReport, AnalyticsError> {
    check_aligned(a, b)?;
    let (a, b) = if options.hourly { (hourly_mean(a)?, hourly_mean(b)?) } else { (a.clone(), b.clone()) };
    let max_lag = (options.max_lag_s / a.step()).max(0) as usize;
    let lag = cross_correlation(&a, &b, max_lag)?;
    Ok(CorrelationReport {
        pearson_r: pearson(&a, &b)?,
        best_lag_s: lag.lag_s,
        r_at_best_lag: lag.r,
        daily_peak_offset_h: daily_peak_offset(&a, &b)?,
        hourly_averaged: options.hourly,
    })
}
