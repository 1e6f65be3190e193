use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::telemetry::{Channel, Series};
use crate::time::{Timestamp, SECONDS_PER_DAY};

pub(crate) const WEATHER_STREAM: u64 = 1;

/// Parameters of the synthetic site weather. A per-day latent anomaly
/// `z ~ N(0, 1)` (AR(1) across days) drives both cloudiness and the daily
/// wind level, so dim days are also calm days.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeatherParams {
    /// W/m² at solar noon under a clear sky.
    pub clear_sky_max: f64,
    pub sunrise_hour: f64,
    pub sunset_hour: f64,
    /// Cloudiness factor is `cloud_mean + cloud_spread * z`, clamped to
    /// `[cloud_min, 1]`. "Cloudiness" here is the transmitted fraction.
    pub cloud_mean: f64,
    pub cloud_spread: f64,
    pub cloud_min: f64,
    /// Overrides the random daily factor.
    pub fixed_cloudiness: Option<f64>,
    /// Day-to-day autocorrelation of `z`.
    pub persistence: f64,
    /// m/s long-run mean.
    pub wind_mean: f64,
    /// Relative amplitude of the diurnal wind cycle.
    pub wind_diurnal: f64,
    pub wind_peak_hour: f64,
    /// Relative amplitude of the 12 h wind harmonic, in phase at the peak hour.
    pub wind_semidiurnal: f64,
    /// Daily wind level is `max(0.1, 1 + wind_day_coupling * z)`.
    pub wind_day_coupling: f64,
    pub wind_noise_sd: f64,
    /// Sample-to-sample autocorrelation of the wind noise.
    pub wind_noise_persistence: f64,
}

impl Default for WeatherParams {
    fn default() -> Self {
        Self {
            clear_sky_max: 1000.0,
            sunrise_hour: 6.0,
            sunset_hour: 18.0,
            cloud_mean: 0.6,
            cloud_spread: 0.2,
            cloud_min: 0.05,
            fixed_cloudiness: None,
            persistence: 0.6,
            wind_mean: 10.0,
            wind_diurnal: 0.85,
            wind_peak_hour: 12.75,
            wind_semidiurnal: 0.15,
            wind_day_coupling: 0.2,
            wind_noise_sd: 1.0,
            wind_noise_persistence: 0.8,
        }
    }
}

impl WeatherParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let bad = |m: &str| Err(SimError::Params(m.to_string()));
        if !(self.clear_sky_max >= 0.0) {
            return bad("clear_sky_max must be non-negative");
        }
        if !(0.0 <= self.sunrise_hour && self.sunrise_hour < self.sunset_hour && self.sunset_hour <= 24.0) {
            return bad("need 0 <= sunrise_hour < sunset_hour <= 24");
        }
        if !(0.0..=1.0).contains(&self.cloud_min)
            || !(self.cloud_spread >= 0.0)
            || !self.cloud_mean.is_finite()
        {
            return bad("cloudiness parameters out of range");
        }
        if let Some(c) = self.fixed_cloudiness {
            if !(0.0..=1.0).contains(&c) {
                return bad("fixed_cloudiness must be in [0, 1]");
            }
        }
        for (name, r) in
            [("persistence", self.persistence), ("wind_noise_persistence", self.wind_noise_persistence)]
        {
            if !(0.0..1.0).contains(&r) {
                return Err(SimError::Params(format!("{name} must be in [0, 1)")));
            }
        }
        if !(self.wind_mean >= 0.0
            && self.wind_diurnal >= 0.0
            && self.wind_noise_sd >= 0.0
            && self.wind_day_coupling >= 0.0)
        {
            return bad("wind parameters must be non-negative");
        }
        Ok(())
    }

    /// Clear-sky irradiance at a fractional hour of day.
    pub fn clear_sky(&self, hour: f64) -> f64 {
        let (rise, set) = (self.sunrise_hour, self.sunset_hour);
        if hour <= rise || hour >= set {
            return 0.0;
        }
        self.clear_sky_max * (std::f64::consts::PI * (hour - rise) / (set - rise)).sin()
    }

    fn cloudiness(&self, z: f64) -> f64 {
        self.fixed_cloudiness
            .unwrap_or_else(|| (self.cloud_mean + self.cloud_spread * z).clamp(self.cloud_min, 1.0))
    }
}

/// Generates `days` whole days of irradiance (W/m²) and wind speed (m/s)
/// from `start` on a `step_s` grid. Deterministic per seed.
pub fn synthetic_weather(
    seed: u64,
    start: Timestamp,
    days: usize,
    step_s: i64,
    params: &WeatherParams,
) -> Result<(Series, Series), SimError> {
    params.validate()?;
    if days == 0 {
        return Err(SimError::Params("days must be at least 1".into()));
    }
    if step_s <= 0 || SECONDS_PER_DAY % step_s != 0 {
        return Err(SimError::Params(format!("step {step_s} s does not divide a day")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(WEATHER_STREAM);
    let per_day = (SECONDS_PER_DAY / step_s) as usize;
    let n = days * per_day;
    let mut irradiance = Vec::with_capacity(n);
    let mut wind = Vec::with_capacity(n);

    let rho = params.persistence;
    let phi = params.wind_noise_persistence;
    let mut z: f64 = rng.sample(StandardNormal);
    let mut noise: f64 = params.wind_noise_sd * rng.sample::<f64, _>(StandardNormal);
    for day in 0..days {
        if day > 0 {
            let e: f64 = rng.sample(StandardNormal);
            z = rho * z + (1.0 - rho * rho).sqrt() * e;
        }
        let cloud = params.cloudiness(z);
        let level = params.wind_mean * (1.0 + params.wind_day_coupling * z).max(0.1);
        for k in 0..per_day {
            let t = start.plus_seconds(((day * per_day + k) as i64) * step_s);
            let hour = t.fractional_hour();
            irradiance.push(cloud * params.clear_sky(hour));
            let e: f64 = rng.sample(StandardNormal);
            noise = phi * noise + (1.0 - phi * phi).sqrt() * params.wind_noise_sd * e;
            let x = std::f64::consts::TAU * (hour - params.wind_peak_hour) / 24.0;
            let diurnal = 1.0 + params.wind_diurnal * x.cos() + params.wind_semidiurnal * (2.0 * x).cos();
            wind.push((level * diurnal + noise).max(0.0));
        }
    }
    Ok((
        Series::from_dense(Channel::Irradiance, start, step_s, irradiance)?,
        Series::from_dense(Channel::WindSpeed, start, step_s, wind)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn start() -> Timestamp {
        Timestamp::from_ymd_hms(2019, 1, 1, 0, 0, 0)
    }

    #[test]
    fn clear_sky_day_peaks_at_parameter() {
        let p = WeatherParams { fixed_cloudiness: Some(1.0), ..Default::default() };
        let (irr, _) = synthetic_weather(3, start(), 5, 600, &p).unwrap();
        let max = irr.present().map(|(_, v)| v).fold(0.0, f64::max);
        assert!((max - 1000.0).abs() < 1e-9);
        assert_eq!(irr.values()[0], Some(0.0));
        assert_eq!(irr.values()[72], Some(1000.0));
    }

    #[test]
    fn wind_mean_near_ten() {
        let (_, wind) = synthetic_weather(11, start(), 365, 600, &WeatherParams::default()).unwrap();
        let v = wind.dense().unwrap();
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 10.0).abs() < 1.0, "mean {mean}");
    }

    #[test]
    fn dim_days_are_calm_days() {
        let (irr, wind) = synthetic_weather(5, start(), 200, 600, &WeatherParams::default()).unwrap();
        let (irr, wind) = (irr.dense().unwrap(), wind.dense().unwrap());
        let mut seen = 0;
        for (i_day, w_day) in irr.chunks(144).zip(wind.chunks(144)) {
            let peak = i_day.iter().cloned().fold(0.0, f64::max);
            if peak < 500.0 {
                seen += 1;
                let w = w_day.iter().sum::<f64>() / 144.0;
                assert!(w < 10.0, "dim day with mean wind {w}");
            }
        }
        assert!(seen > 5, "only {seen} dim days");
    }

    #[test]
    fn deterministic_and_seed_sensitive() {
        let p = WeatherParams::default();
        let a = synthetic_weather(9, start(), 3, 600, &p).unwrap();
        let b = synthetic_weather(9, start(), 3, 600, &p).unwrap();
        let c = synthetic_weather(10, start(), 3, 600, &p).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.1, c.1);
    }

    #[test]
    fn rejects_bad_params() {
        let p = WeatherParams { sunrise_hour: 19.0, ..Default::default() };
        assert!(synthetic_weather(1, start(), 1, 600, &p).is_err());
        assert!(synthetic_weather(1, start(), 0, 600, &WeatherParams::default()).is_err());
        assert!(synthetic_weather(1, start(), 1, 7, &WeatherParams::default()).is_err());
    }
}
