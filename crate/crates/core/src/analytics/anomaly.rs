use serde::{Deserialize, Serialize};

use super::profile::typical_day;
use super::AnalyticsError;
use crate::telemetry::{Channel, Series};
use crate::time::Timestamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Global,
    /// Mean and spread of the same time-of-day slot.
    #[default]
    PerSlot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalyKind {
    Spike,
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Anomaly {
    pub timestamp: Timestamp,
    pub channel: Channel,
    pub value: f64,
    pub zscore: f64,
    pub kind: AnomalyKind,
}

/// Flags samples at least `z_threshold` population standard deviations away
/// from the baseline mean. Slots with zero spread are skipped under the
/// per-slot baseline.
pub fn detect_anomalies(
    series: &Series,
    z_threshold: f64,
    baseline: Baseline,
) -> Result<Vec<Anomaly>, AnalyticsError> {
    let stats: Box<dyn Fn(usize) -> Option<(f64, f64)>> = match baseline {
        Baseline::Global => {
            let vals: Vec<f64> = series.present().map(|(_, v)| v).collect();
            if vals.is_empty() {
                return Err(AnalyticsError::EmptySeries);
            }
            let n = vals.len() as f64;
            let mu = vals.iter().sum::<f64>() / n;
            let sigma = (vals.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n).sqrt();
            if sigma <= 0.0 {
                return Err(AnalyticsError::ZeroVariance);
            }
            Box::new(move |_| Some((mu, sigma)))
        }
        Baseline::PerSlot => {
            let p = typical_day(series)?;
            if p.slot_stddev.iter().all(|s| s.is_none_or(|x| x <= 0.0)) {
                return Err(AnalyticsError::ZeroVariance);
            }
            Box::new(move |i| {
                let slot = p.slot_of(series.timestamp(i));
                match (p.slot_means[slot], p.slot_stddev[slot]) {
                    (Some(m), Some(s)) if s > 0.0 => Some((m, s)),
                    _ => None,
                }
            })
        }
    };
    Ok(series
        .present()
        .filter_map(|(i, v)| {
            let (mu, sigma) = stats(i)?;
            let z = (v - mu) / sigma;
            (z.abs() >= z_threshold).then(|| Anomaly {
                timestamp: series.timestamp(i),
                channel: series.channel(),
                value: v,
                zscore: z,
                kind: if z > 0.0 { AnomalyKind::Spike } else { AnomalyKind::Drop },
            })
        })
        .collect())
}
