use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{AcfPoint, Spectrum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    pub period_hours: f64,
    pub frequency_cpd: f64,
    /// Bin power over total non-DC power.
    pub strength: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcfPeak {
    pub lag_hours: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub peaks: Vec<SpectralPeak>,
    pub acf_peaks: Vec<AcfPeak>,
}

impl PeriodicityReport {
    pub fn with_acf(mut self, acf: &[AcfPoint], top_k: usize) -> Self {
        self.acf_peaks = acf_peaks(acf, top_k);
        self
    }

    pub fn top_periods(&self, k: usize) -> Vec<f64> {
        self.peaks.iter().take(k).map(|p| p.period_hours).collect()
    }
}

/// Ranks the non-DC local maxima of a spectrum by their share of non-DC power.
///
/// Bin `k >= 1` is a local maximum when it is strictly above its left
/// neighbour (if that is not DC) and not below its right neighbour. Ties in
/// strength go to the longer period.
pub fn detect_periods(spectrum: &Spectrum, top_k: usize, min_strength: f64) -> PeriodicityReport {
    let n = spectrum.len();
    let power: Vec<f64> = (0..n).map(|k| spectrum.power(k)).collect();
    let total: f64 = power.iter().skip(1).sum();
    if n < 2 || total <= 0.0 {
        return PeriodicityReport::default();
    }
    let mut peaks: Vec<SpectralPeak> = (1..n)
        .filter(|&k| {
            let p = power[k];
            p > 0.0 && (k == 1 || p > power[k - 1]) && (k + 1 == n || p >= power[k + 1])
        })
        .map(|k| {
            let f = spectrum.frequencies_cpd[k];
            SpectralPeak { period_hours: 24.0 / f, frequency_cpd: f, strength: power[k] / total }
        })
        .filter(|p| p.strength >= min_strength)
        .collect();
    peaks.sort_by(|a, b| {
        b.strength
            .partial_cmp(&a.strength)
            .unwrap_or(Ordering::Equal)
            .then(b.period_hours.partial_cmp(&a.period_hours).unwrap_or(Ordering::Equal))
    });
    peaks.truncate(top_k);
    PeriodicityReport { peaks, acf_peaks: Vec::new() }
}

/// Positive local maxima of an autocorrelation curve, strongest first.
pub fn acf_peaks(acf: &[AcfPoint], top_k: usize) -> Vec<AcfPeak> {
    let mut peaks: Vec<AcfPeak> = acf
        .windows(3)
        .filter(|w| w[1].r > 0.0 && w[1].r > w[0].r && w[1].r >= w[2].r)
        .map(|w| AcfPeak { lag_hours: w[1].lag_hours(), r: w[1].r })
        .collect();
    peaks.sort_by(|a, b| {
        b.r.partial_cmp(&a.r)
            .unwrap_or(Ordering::Equal)
            .then(a.lag_hours.partial_cmp(&b.lag_hours).unwrap_or(Ordering::Equal))
    });
    peaks.truncate(top_k);
    peaks
}
