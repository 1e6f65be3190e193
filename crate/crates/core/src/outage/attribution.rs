use serde::{Deserialize, Serialize};

use super::{OutageEpisode, OutageError};
use crate::telemetry::{Channel, Series, TelemetryFrame};
use crate::time::{Timestamp, SECONDS_PER_DAY, SECONDS_PER_HOUR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cause {
    LowPriorResource,
    HighPriorDemand,
    BatteryFault,
    Combination,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AttributionConfig {
    pub lookback_resource_s: i64,
    /// m/s
    pub wind_low_threshold: f64,
    /// W/m2, compared against the mean of daily maxima over the lookback.
    pub irradiance_low_threshold: f64,
    pub lookback_demand_s: i64,
    /// Multiple of the frame-wide mean load.
    pub demand_high_factor: f64,
    pub lookback_fault_s: i64,
    /// Largest tolerated |dV| between consecutive samples, volts.
    pub voltage_jerk_threshold: f64,
}

impl Default for AttributionConfig {
    fn default() -> Self {
        Self {
            lookback_resource_s: 48 * SECONDS_PER_HOUR,
            wind_low_threshold: 5.0,
            irradiance_low_threshold: 700.0,
            lookback_demand_s: 12 * SECONDS_PER_HOUR,
            demand_high_factor: 1.5,
            lookback_fault_s: 24 * SECONDS_PER_HOUR,
            voltage_jerk_threshold: 2.0,
        }
    }
}

impl AttributionConfig {
    fn longest_lookback(&self) -> i64 {
        self.lookback_resource_s.max(self.lookback_demand_s).max(self.lookback_fault_s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub prior_mean_wind: f64,
    pub prior_daily_max_irradiance: f64,
    pub pre_outage_mean_load: f64,
    pub period_mean_load: f64,
    pub max_voltage_step: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CauseAttribution {
    pub episode: OutageEpisode,
    pub causes: Vec<Cause>,
    pub evidence: Evidence,
}

fn mean(values: &[Option<f64>]) -> Option<f64> {
    let (sum, n) = values.iter().flatten().fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Mean of the maxima of consecutive 24 h chunks counted back from `end`.
fn mean_daily_max(series: &Series, from: Timestamp, end: Timestamp) -> Option<f64> {
    let mut maxima = Vec::new();
    let mut chunk_end = end;
    while chunk_end > from {
        let chunk_start = Timestamp(chunk_end.seconds() - SECONDS_PER_DAY).max(from);
        let (_, w) = series.window(chunk_start, chunk_end);
        if let Some(m) = w.iter().flatten().copied().reduce(f64::max) {
            maxima.push(m);
        }
        chunk_end = chunk_start;
    }
    (!maxima.is_empty()).then(|| maxima.iter().sum::<f64>() / maxima.len() as f64)
}

fn max_step(values: &[Option<f64>]) -> Option<f64> {
    values.windows(2).filter_map(|w| Some((w[1]? - w[0]?).abs())).reduce(f64::max)
}

/// Applies the four-way cause rules to the data preceding an episode.
///
/// - low prior resource: mean wind and mean daily-max irradiance over the
///   resource lookback both under their thresholds;
/// - high prior demand: mean load over the demand lookback above
///   `demand_high_factor` times the frame-wide mean load;
/// - battery fault: a sample-to-sample voltage jump above the jerk threshold
///   within the fault lookback.
///
/// Two or more firing rules add `Combination`; none gives `Undetermined`.
pub fn attribute_cause(
    episode: &OutageEpisode,
    frame: &TelemetryFrame,
    config: &AttributionConfig,
) -> Result<CauseAttribution, OutageError> {
    let start = episode.start;
    if frame.start().seconds() > start.seconds() - config.longest_lookback() {
        return Err(OutageError::InsufficientLookback(start));
    }
    let irr = frame.require(Channel::Irradiance)?;
    let wind = frame.require(Channel::WindSpeed)?;
    let load = frame.require(Channel::LoadPower)?;
    let volt = frame.require(Channel::DcVoltage)?;
    let lacking = || OutageError::InsufficientLookback(start);
    let back = |s: i64| Timestamp(start.seconds() - s);

    let prior_mean_wind = mean(wind.window(back(config.lookback_resource_s), start).1).ok_or_else(lacking)?;
    let prior_daily_max_irradiance =
        mean_daily_max(irr, back(config.lookback_resource_s), start).ok_or_else(lacking)?;
    let pre_outage_mean_load =
        mean(load.window(back(config.lookback_demand_s), start).1).ok_or_else(lacking)?;
    let period_mean_load = mean(load.values()).ok_or_else(lacking)?;
    let max_voltage_step = max_step(volt.window(back(config.lookback_fault_s), start).1).unwrap_or(0.0);

    let mut causes = Vec::new();
    if prior_mean_wind < config.wind_low_threshold
        && prior_daily_max_irradiance < config.irradiance_low_threshold
    {
        causes.push(Cause::LowPriorResource);
    }
    if pre_outage_mean_load > config.demand_high_factor * period_mean_load {
        causes.push(Cause::HighPriorDemand);
    }
    if max_voltage_step > config.voltage_jerk_threshold {
        causes.push(Cause::BatteryFault);
    }
    match causes.len() {
        0 => causes.push(Cause::Undetermined),
        1 => {}
        _ => causes.push(Cause::Combination),
    }
    Ok(CauseAttribution {
        episode: *episode,
        causes,
        evidence: Evidence {
            prior_mean_wind,
            prior_daily_max_irradiance,
            pre_outage_mean_load,
            period_mean_load,
            max_voltage_step,
        },
    })
}
