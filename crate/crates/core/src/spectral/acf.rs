use serde::{Deserialize, Serialize};

use super::SpectralError;
use crate::telemetry::Series;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcfPoint {
    pub lag_s: i64,
    pub r: f64,
}

impl AcfPoint {
    pub fn lag_hours(&self) -> f64 {
        self.lag_s as f64 / 3600.0
    }
}

/// Biased, normalised autocorrelation for lags `0..=max_lag` (whole steps):
/// `r(k) = sum_t (x_t - m)(x_{t+k} - m) / sum_t (x_t - m)^2`.
pub fn autocorrelation(series: &Series, max_lag_s: i64) -> Result<Vec<AcfPoint>, SpectralError> {
    let x = series.dense().ok_or(SpectralError::Gaps(series.gap_count()))?;
    if max_lag_s < 0 || max_lag_s >= series.span_seconds() {
        return Err(SpectralError::LagTooLong { max_lag_s, span_s: series.span_seconds() });
    }
    let n = x.len();
    let mean = x.iter().sum::<f64>() / n as f64;
    let d: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let denom: f64 = d.iter().map(|v| v * v).sum();
    if denom <= 0.0 || !denom.is_finite() {
        return Err(SpectralError::ZeroVariance);
    }
    let max_k = (max_lag_s / series.step()) as usize;
    Ok((0..=max_k.min(n - 1))
        .map(|k| {
            let num: f64 = d[..n - k].iter().zip(&d[k..]).map(|(a, b)| a * b).sum();
            AcfPoint { lag_s: k as i64 * series.step(), r: num / denom }
        })
        .collect())
}
