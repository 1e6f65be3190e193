use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::telemetry::{Channel, Series};
use crate::time::{Timestamp, SECONDS_PER_DAY};

pub(crate) const DEMAND_STREAM: u64 = 2;

/// Community load model: an evening-peaked daily shape with a smaller
/// early-morning peak from the 12 h harmonic and a midday trough, plus
/// day-to-day level variation and white measurement-like noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemandParams {
    /// Multiplies the whole profile.
    pub scale: f64,
    /// kW daily mean before scaling.
    pub mean_kw: f64,
    /// Fractional growth per year of elapsed time.
    pub growth_per_year: f64,
    pub weekend_factor: f64,
    /// Standard deviation of the daily level factor.
    pub day_sd: f64,
    pub daily_amplitude: f64,
    pub semidiurnal_amplitude: f64,
    /// Hour at which the daily harmonic peaks.
    pub peak_hour: f64,
    /// One of the two hours at which the 12 h harmonic peaks.
    pub semidiurnal_peak_hour: f64,
    /// Noise standard deviation as a fraction of `mean_kw`.
    pub noise_sd: f64,
}

impl Default for DemandParams {
    fn default() -> Self {
        Self {
            scale: 1.0,
            mean_kw: 0.9,
            growth_per_year: 0.0,
            weekend_factor: 1.05,
            day_sd: 0.1,
            daily_amplitude: 0.4,
            semidiurnal_amplitude: 0.25,
            peak_hour: 22.0,
            semidiurnal_peak_hour: 6.0,
            noise_sd: 0.05,
        }
    }
}

impl DemandParams {
    pub fn validate(&self) -> Result<(), SimError> {
        let fields = [
            ("scale", self.scale),
            ("mean_kw", self.mean_kw),
            ("weekend_factor", self.weekend_factor),
            ("day_sd", self.day_sd),
            ("daily_amplitude", self.daily_amplitude),
            ("semidiurnal_amplitude", self.semidiurnal_amplitude),
            ("noise_sd", self.noise_sd),
        ];
        if let Some((name, _)) = fields.iter().find(|(_, v)| !(v.is_finite() && *v >= 0.0)) {
            return Err(SimError::Params(format!("{name} must be non-negative")));
        }
        if !(self.growth_per_year > -1.0) || !(0.0..24.0).contains(&self.peak_hour) {
            return Err(SimError::Params("growth_per_year or peak_hour out of range".into()));
        }
        Ok(())
    }

    /// Noise-free daily shape factor (mean 1 over a day).
    pub fn shape(&self, hour: f64) -> f64 {
        let x = std::f64::consts::TAU * (hour - self.peak_hour) / 24.0;
        let y = std::f64::consts::TAU * (hour - self.semidiurnal_peak_hour) / 12.0;
        1.0 + self.daily_amplitude * x.cos() + self.semidiurnal_amplitude * y.cos()
    }
}

/// Generates `days` whole days of load (kW) from `start` on a `step_s` grid.
pub fn demand_profile(
    seed: u64,
    start: Timestamp,
    days: usize,
    step_s: i64,
    params: &DemandParams,
) -> Result<Series, SimError> {
    params.validate()?;
    if days == 0 {
        return Err(SimError::Params("days must be at least 1".into()));
    }
    if step_s <= 0 || SECONDS_PER_DAY % step_s != 0 {
        return Err(SimError::Params(format!("step {step_s} s does not divide a day")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(DEMAND_STREAM);
    let per_day = (SECONDS_PER_DAY / step_s) as usize;
    let base = params.scale * params.mean_kw;
    let mut values = Vec::with_capacity(days * per_day);
    for day in 0..days {
        let e: f64 = rng.sample(StandardNormal);
        let day_factor = (1.0 + params.day_sd * e).clamp(0.5, 1.5);
        for k in 0..per_day {
            let t = start.plus_seconds(((day * per_day + k) as i64) * step_s);
            let years = (t.seconds() - start.seconds()) as f64 / (365.25 * SECONDS_PER_DAY as f64);
            let weekend = if t.weekday() >= 5 { params.weekend_factor } else { 1.0 };
            let e: f64 = rng.sample(StandardNormal);
            let v = base
                * (1.0 + params.growth_per_year * years)
                * weekend
                * day_factor
                * params.shape(t.fractional_hour())
                + base * params.noise_sd * e;
            values.push(v.max(0.0));
        }
    }
    Ok(Series::from_dense(Channel::LoadPower, start, step_s, values)?)
}
