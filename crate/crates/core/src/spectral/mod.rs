//! Discrete Fourier analysis of telemetry channels: amplitude spectrum,
//! periodogram, autocorrelation and ranked period detection.
//!
//! Frequencies are reported in cycles per day so that a daily cycle sits at
//! 1.0 and a half-day cycle at 2.0 regardless of the grid step.

mod acf;
mod periods;

pub use acf::{autocorrelation, AcfPoint};
pub use periods::{acf_peaks, detect_periods, AcfPeak, PeriodicityReport, SpectralPeak};

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::telemetry::Series;
use crate::time::SECONDS_PER_DAY;

#[derive(Debug, thiserror::Error)]
pub enum SpectralError {
    #[error("series has {0} gaps; fill them before spectral analysis")]
    Gaps(usize),
    #[error("series too short for spectral analysis: {0} samples")]
    TooShort(usize),
    #[error("zero padding to {pad} is shorter than the series ({len})")]
    PadTooShort { pad: usize, len: usize },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("max lag {max_lag_s} s must be shorter than the series span {span_s} s")]
    LagTooLong { max_lag_s: i64, span_s: i64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Detrend {
    None,
    #[default]
    Mean,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Window {
    Rect,
    /// Periodic Hann, `0.5 * (1 - cos(2 pi i / n))`.
    #[default]
    Hann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SpectralOptions {
    pub detrend: Detrend,
    pub window: Window,
    /// Zero-pad the prepared signal to this length. Off by default: padding
    /// moves bin centres.
    pub pad_to: Option<usize>,
}

impl SpectralOptions {
    pub fn raw() -> Self {
        Self { detrend: Detrend::None, window: Window::Rect, pad_to: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumKind {
    Amplitude,
    PowerDensity,
}

/// One-sided spectrum on bins `0..=n/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub kind: SpectrumKind,
    pub frequencies_cpd: Vec<f64>,
    pub magnitudes: Vec<f64>,
    pub bin_width_cpd: f64,
    pub options: SpectralOptions,
}

impl Spectrum {
    /// Power carried by bin `k`, in whatever units the kind implies.
    pub fn power(&self, k: usize) -> f64 {
        match self.kind {
            SpectrumKind::Amplitude => self.magnitudes[k] * self.magnitudes[k],
            SpectrumKind::PowerDensity => self.magnitudes[k],
        }
    }

    /// Integrated power of a density spectrum (sum of `P_k * df`).
    pub fn integrated_power(&self) -> f64 {
        self.magnitudes.iter().sum::<f64>() * self.bin_width_cpd
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency_cpd,magnitude\n");
        for (f, m) in self.frequencies_cpd.iter().zip(&self.magnitudes) {
            out.push_str(&format!("{f},{m}\n"));
        }
        out
    }
}

/// Full complex DFT, `X_k = sum_t x_t exp(-2 pi i k t / n)`, any length.
pub fn fft_real(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|v| Complex64::new(*v, 0.0)).collect();
    if !buf.is_empty() {
        FftPlanner::<f64>::new().plan_fft_forward(buf.len()).process(&mut buf);
    }
    buf
}

fn detrend(x: &mut [f64], mode: Detrend) {
    let n = x.len() as f64;
    match mode {
        Detrend::None => {}
        Detrend::Mean => {
            let m = x.iter().sum::<f64>() / n;
            x.iter_mut().for_each(|v| *v -= m);
        }
        Detrend::Linear => {
            let t_mean = (n - 1.0) / 2.0;
            let x_mean = x.iter().sum::<f64>() / n;
            let (mut sxy, mut sxx) = (0.0, 0.0);
            for (i, v) in x.iter().enumerate() {
                let dt = i as f64 - t_mean;
                sxy += dt * (v - x_mean);
                sxx += dt * dt;
            }
            let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
            for (i, v) in x.iter_mut().enumerate() {
                *v -= x_mean + slope * (i as f64 - t_mean);
            }
        }
    }
}

fn apply_window(x: &mut [f64], window: Window) {
    if window == Window::Hann {
        let n = x.len() as f64;
        for (i, v) in x.iter_mut().enumerate() {
            *v *= 0.5 * (1.0 - (2.0 * PI * i as f64 / n).cos());
        }
    }
}

/// Detrended, windowed and padded signal exactly as fed to the transform.
pub fn prepare(series: &Series, options: &SpectralOptions) -> Result<Vec<f64>, SpectralError> {
    let mut x = series.dense().ok_or(SpectralError::Gaps(series.gap_count()))?;
    if x.len() < 4 {
        return Err(SpectralError::TooShort(x.len()));
    }
    detrend(&mut x, options.detrend);
    apply_window(&mut x, options.window);
    if let Some(pad) = options.pad_to {
        if pad < x.len() {
            return Err(SpectralError::PadTooShort { pad, len: x.len() });
        }
        x.resize(pad, 0.0);
    }
    Ok(x)
}

fn frequency_axis(n: usize, step_s: i64) -> (Vec<f64>, f64) {
    let df = SECONDS_PER_DAY as f64 / (n as f64 * step_s as f64);
    ((0..=n / 2).map(|k| k as f64 * df).collect(), df)
}

/// Magnitude spectrum `|X_k|` on bins `0..=n/2`.
pub fn dft(series: &Series, options: &SpectralOptions) -> Result<Spectrum, SpectralError> {
    let x = prepare(series, options)?;
    let n = x.len();
    let spectrum = fft_real(&x);
    let (frequencies_cpd, bin_width_cpd) = frequency_axis(n, series.step());
    Ok(Spectrum {
        kind: SpectrumKind::Amplitude,
        frequencies_cpd,
        magnitudes: spectrum[..=n / 2].iter().map(|c| c.norm()).collect(),
        bin_width_cpd,
        options: *options,
    })
}

/// One-sided periodogram in units^2 per cycle/day.
///
/// `P_k = c_k |X_k|^2 dt / n` with `dt` the step in days and `c_k = 2` except
/// at DC and Nyquist, so `sum_k P_k * df` equals the mean square of the
/// prepared (windowed) signal.
pub fn psd(series: &Series, options: &SpectralOptions) -> Result<Spectrum, SpectralError> {
    let x = prepare(series, options)?;
    let n = x.len();
    let spectrum = fft_real(&x);
    let (frequencies_cpd, bin_width_cpd) = frequency_axis(n, series.step());
    let dt_days = series.step() as f64 / SECONDS_PER_DAY as f64;
    let magnitudes = (0..=n / 2)
        .map(|k| {
            let c = if k == 0 || (n % 2 == 0 && k == n / 2) { 1.0 } else { 2.0 };
            c * spectrum[k].norm_sqr() * dt_days / n as f64
        })
        .collect();
    Ok(Spectrum {
        kind: SpectrumKind::PowerDensity,
        frequencies_cpd,
        magnitudes,
        bin_width_cpd,
        options: *options,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::telemetry::Channel;
    use crate::time::Timestamp;

    fn series(v: Vec<f64>) -> Series {
        Series::deviations(Channel::LoadPower, Timestamp(0), 3600, v.into_iter().map(Some).collect()).unwrap()
    }

    /// Naive O(n^2) transform.
    fn naive(x: &[f64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (t, v)| {
                    let a = -2.0 * PI * (k * t % n) as f64 / n as f64;
                    acc + Complex64::new(a.cos(), a.sin()) * v
                })
            })
            .collect()
    }

    #[test]
    fn constant_is_all_dc() {
        let s = series(vec![2.5; 16]);
        let sp = dft(&s, &SpectralOptions::raw()).unwrap();
        assert!((sp.magnitudes[0] - 40.0).abs() < 1e-12);
        assert!(sp.magnitudes[1..].iter().all(|m| m.abs() < 1e-12));
    }

    #[test]
    fn sine_with_period_24_over_96_samples() {
        let x: Vec<f64> = (0..96).map(|t| (2.0 * PI * t as f64 / 24.0).sin()).collect();
        let sp = dft(&series(x.clone()), &SpectralOptions::raw()).unwrap();
        let oracle = naive(&x);
        for (k, m) in sp.magnitudes.iter().enumerate() {
            assert!((m - oracle[k].norm()).abs() < 1e-9);
            if k == 4 {
                assert!((m - 48.0).abs() < 1e-9);
            } else {
                assert!(m.abs() < 1e-9, "bin {k} = {m}");
            }
        }
        // 96 hourly samples = 4 days, so bin 4 is 1 cycle/day
        assert!((sp.frequencies_cpd[4] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn psd_zero_and_parseval() {
        let z = psd(&series(vec![0.0; 32]), &SpectralOptions::raw()).unwrap();
        assert!(z.magnitudes.iter().all(|m| *m == 0.0));

        let x: Vec<f64> = (0..48).map(|t| (2.0 * PI * t as f64 / 12.0).sin()).collect();
        let p = psd(&series(x.clone()), &SpectralOptions::raw()).unwrap();
        let mean_sq = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
        assert!((p.integrated_power() - mean_sq).abs() < 1e-12);
        let non_dc: f64 = p.magnitudes[1..].iter().sum::<f64>() * p.bin_width_cpd;
        assert!((p.magnitudes[4] * p.bin_width_cpd - non_dc).abs() < 1e-12);
    }

    #[test]
    fn hann_parseval_uses_windowed_energy() {
        let x: Vec<f64> = (0..50).map(|t| ((t * 7 % 11) as f64).sqrt()).collect();
        let opts = SpectralOptions::default();
        let prepared = prepare(&series(x.clone()), &opts).unwrap();
        let p = psd(&series(x), &opts).unwrap();
        let mean_sq = prepared.iter().map(|v| v * v).sum::<f64>() / prepared.len() as f64;
        assert!((p.integrated_power() - mean_sq).abs() < 1e-12 * mean_sq.max(1.0));
    }

    #[test]
    fn errors() {
        let gappy =
            Series::new(Channel::LoadPower, Timestamp(0), 600, vec![Some(1.0), None, Some(1.0), Some(2.0)])
                .unwrap();
        assert!(matches!(dft(&gappy, &SpectralOptions::default()), Err(SpectralError::Gaps(1))));
        assert!(matches!(
            dft(&series(vec![1.0, 2.0, 3.0]), &SpectralOptions::default()),
            Err(SpectralError::TooShort(3))
        ));
        let opts = SpectralOptions { pad_to: Some(4), ..SpectralOptions::raw() };
        assert!(dft(&series(vec![1.0; 8]), &opts).is_err());
    }

    #[test]
    fn padding_is_explicit() {
        let opts = SpectralOptions { pad_to: Some(64), ..SpectralOptions::raw() };
        let sp = dft(&series(vec![1.0; 48]), &opts).unwrap();
        assert_eq!(sp.len(), 33);
    }

    #[test]
    fn linear_detrend_removes_ramp() {
        let x: Vec<f64> = (0..20).map(|t| 3.0 + 0.5 * t as f64).collect();
        let opts = SpectralOptions { detrend: Detrend::Linear, window: Window::Rect, pad_to: None };
        let sp = dft(&series(x), &opts).unwrap();
        assert!(sp.magnitudes.iter().all(|m| m.abs() < 1e-9));
    }
}
