use serde::{Deserialize, Serialize};

use super::ForecastError;
use crate::simgrid::{step, BatteryState, MicrogridConfig, StepInput};
use crate::telemetry::Series;
use crate::time::Timestamp;

/// A predicted transition into low-voltage cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageAlert {
    pub predicted_outage_start: Timestamp,
    pub predicted_min_voltage: f64,
    /// Load energy that would go unserved during the predicted outage, kWh.
    pub deficit_energy: f64,
    /// Smallest constant load reduction (0.01 kW resolution) that avoids
    /// every predicted outage in the horizon.
    pub recommended_shed: f64,
}

/// The load forecast reduced by a constant `shed_kw`, floored at zero.
pub fn apply_shed(load: &Series, shed_kw: f64) -> Series {
    load.with_values(load.values().iter().map(|v| v.map(|x| (x - shed_kw).max(0.0))).collect())
        .expect("shedding keeps values finite and non-negative")
}

struct Predicted {
    start_idx: usize,
    min_v: f64,
    deficit: f64,
}

fn run(
    irradiance: &[f64],
    wind: &[f64],
    load: &[f64],
    shed_kw: f64,
    battery: BatteryState,
    dt_s: i64,
    config: &MicrogridConfig,
) -> Result<Vec<Predicted>, ForecastError> {
    let mut state = battery;
    let mut out: Vec<Predicted> = Vec::new();
    let mut open: Option<Predicted> = None;
    for k in 0..load.len() {
        let input = StepInput {
            irradiance: irradiance[k],
            wind_speed: wind[k],
            demand_kw: (load[k] - shed_kw).max(0.0),
        };
        let step = step(state, input, dt_s, config)?;
        state = step.state;
        match (&mut open, state.online) {
            (None, false) => {
                open =
                    Some(Predicted { start_idx: k, min_v: state.terminal_v, deficit: step.energy.unserved })
            }
            (Some(p), false) => {
                p.min_v = p.min_v.min(state.terminal_v);
                p.deficit += step.energy.unserved;
            }
            (Some(_), true) => out.extend(open.take()),
            (None, true) => {}
        }
    }
    out.extend(open);
    Ok(out)
}

/// Runs the plant's energy balance over the forecasts from `battery` and
/// returns one alert per predicted outage within `horizon_s`.
pub fn outage_risk(
    irradiance: &Series,
    wind: &Series,
    load: &Series,
    battery: BatteryState,
    config: &MicrogridConfig,
    horizon_s: i64,
) -> Result<Vec<OutageAlert>, ForecastError> {
    config.validate()?;
    let dt = load.step();
    if horizon_s <= 0 {
        return Err(ForecastError::EmptyHorizon);
    }
    for s in [irradiance, wind] {
        if s.start() != load.start() || s.step() != dt {
            return Err(ForecastError::Misaligned(format!(
                "{} starts {} every {} s; load starts {} every {} s",
                s.channel(),
                s.start(),
                s.step(),
                load.start(),
                dt
            )));
        }
    }
    let n = ((horizon_s + dt - 1) / dt) as usize;
    let take = |s: &Series| -> Result<Vec<f64>, ForecastError> {
        if s.len() < n {
            return Err(ForecastError::Misaligned(format!(
                "{} covers {} steps, horizon needs {n}",
                s.channel(),
                s.len()
            )));
        }
        s.values()[..n]
            .iter()
            .map(|v| v.ok_or_else(|| ForecastError::Misaligned(format!("{} forecast has gaps", s.channel()))))
            .collect()
    };
    let (irr, wnd, ld) = (take(irradiance)?, take(wind)?, take(load)?);

    let predicted = run(&irr, &wnd, &ld, 0.0, battery, dt, config)?;
    if predicted.is_empty() {
        return Ok(Vec::new());
    }
    let max_load = ld.iter().cloned().fold(0.0, f64::max);
    let top = (max_load * 100.0).ceil() as u32;
    let mut shed = top as f64 / 100.0;
    for k in 1..=top {
        let s = k as f64 / 100.0;
        if run(&irr, &wnd, &ld, s, battery, dt, config)?.is_empty() {
            shed = s;
            break;
        }
    }
    Ok(predicted
        .into_iter()
        .map(|p| OutageAlert {
            predicted_outage_start: load.timestamp(p.start_idx),
            predicted_min_voltage: p.min_v,
            deficit_energy: p.deficit,
            recommended_shed: shed,
        })
        .collect())
}

/// One `ALERT <time> shed <kW> kW` line per alert.
pub fn alerts_text(alerts: &[OutageAlert]) -> String {
    alerts
        .iter()
        .map(|a| format!("ALERT {} shed {:.2} kW\n", a.predicted_outage_start, a.recommended_shed))
        .collect()
}
