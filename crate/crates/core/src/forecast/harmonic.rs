use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::ForecastError;
use crate::linalg;
use crate::telemetry::{Channel, Series};
use crate::time::{Timestamp, SECONDS_PER_HOUR};

pub const DEFAULT_PERIODS_HOURS: [f64; 2] = [24.0, 12.0];

/// `amplitude * cos(2π t / period + phase)`, with `t` in seconds since the
/// epoch of local standard time, so a 24 h component with phase 0 peaks at
/// midnight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicComponent {
    pub period_hours: f64,
    pub amplitude: f64,
    /// Radians in (-π, π].
    pub phase: f64,
}

impl HarmonicComponent {
    pub fn eval(&self, t: Timestamp) -> f64 {
        self.amplitude * (angle(t, self.period_hours) + self.phase).cos()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicModel {
    pub channel: Channel,
    pub mean: f64,
    pub components: Vec<HarmonicComponent>,
    pub residual_rms: f64,
    pub fit_start: Timestamp,
    pub fit_end: Timestamp,
}

impl HarmonicModel {
    /// Unclamped model value.
    pub fn eval(&self, t: Timestamp) -> f64 {
        self.mean + self.components.iter().map(|c| c.eval(t)).sum::<f64>()
    }
}

/// `2π t / P`, reduced modulo the period first to keep precision at epoch
/// scale timestamps.
fn angle(t: Timestamp, period_hours: f64) -> f64 {
    let p = period_hours * SECONDS_PER_HOUR as f64;
    TAU * (t.seconds() as f64).rem_euclid(p) / p
}

/// Least-squares fit of `mean + Σ a_i cos(2π t / P_i + φ_i)` through the
/// normal equations of the cos/sin basis.
pub fn fit_harmonic(series: &Series, periods_hours: &[f64]) -> Result<HarmonicModel, ForecastError> {
    let y = series.dense().ok_or(ForecastError::Gaps(series.gap_count()))?;
    for &p in periods_hours {
        if !(p.is_finite() && p > 0.0) {
            return Err(ForecastError::InvalidPeriod(p));
        }
    }
    let longest = periods_hours.iter().cloned().fold(0.0, f64::max);
    let need_s = (2.0 * longest * SECONDS_PER_HOUR as f64).ceil() as i64;
    if series.span_seconds() < need_s {
        return Err(ForecastError::TooShort { need_s, have_s: series.span_seconds() });
    }
    for (i, a) in periods_hours.iter().enumerate() {
        if periods_hours[..i].iter().any(|b| (a - b).abs() <= 1e-9 * a.max(*b)) {
            return Err(ForecastError::RankDeficient);
        }
    }

    let m = 1 + 2 * periods_hours.len();
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    let mut row = vec![0.0; m];
    for (i, &yi) in y.iter().enumerate() {
        basis(series.timestamp(i), periods_hours, &mut row);
        for r in 0..m {
            aty[r] += row[r] * yi;
            for c in r..m {
                ata[r][c] += row[r] * row[c];
            }
        }
    }
    for r in 0..m {
        for c in 0..r {
            ata[r][c] = ata[c][r];
        }
    }
    let coef = linalg::solve(ata, aty, 1e-10).ok_or(ForecastError::RankDeficient)?;

    let components = periods_hours
        .iter()
        .enumerate()
        .map(|(k, &period_hours)| {
            let (c, s) = (coef[1 + 2 * k], coef[2 + 2 * k]);
            let mut phase = (-s).atan2(c);
            if phase <= -PI {
                phase += TAU;
            }
            HarmonicComponent { period_hours, amplitude: c.hypot(s), phase }
        })
        .collect();
    let mut model = HarmonicModel {
        channel: series.channel(),
        mean: coef[0],
        components,
        residual_rms: 0.0,
        fit_start: series.start(),
        fit_end: series.end(),
    };
    let sse: f64 = y.iter().enumerate().map(|(i, yi)| (yi - model.eval(series.timestamp(i))).powi(2)).sum();
    model.residual_rms = (sse / y.len() as f64).sqrt();
    Ok(model)
}

fn basis(t: Timestamp, periods_hours: &[f64], row: &mut [f64]) {
    row[0] = 1.0;
    for (k, &p) in periods_hours.iter().enumerate() {
        let a = angle(t, p);
        row[1 + 2 * k] = a.cos();
        row[2 + 2 * k] = a.sin();
    }
}

/// Evaluates the model on `[from, from + horizon)` every `step_s` seconds,
/// clamping negative values to zero.
pub fn predict(
    model: &HarmonicModel,
    from: Timestamp,
    horizon_s: i64,
    step_s: i64,
) -> Result<Series, ForecastError> {
    if horizon_s <= 0 || step_s <= 0 {
        return Err(ForecastError::EmptyHorizon);
    }
    let n = (horizon_s + step_s - 1) / step_s;
    let values = (0..n).map(|k| model.eval(from.plus_seconds(k * step_s)).max(0.0)).collect();
    Ok(Series::from_dense(model.channel, from, step_s, values)?)
}
