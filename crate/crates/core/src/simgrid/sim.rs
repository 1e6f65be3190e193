use serde::{Deserialize, Serialize};

use super::{
    battery_step, demand_profile, pv_power, synthetic_weather, wind_power, BatteryState, DemandParams,
    MicrogridConfig, SimError, WeatherParams,
};
use crate::outage::OutageEpisode;
use crate::telemetry::{Channel, PeriodLabel, Series, TelemetryFrame};
use crate::time::{Timestamp, SECONDS_PER_DAY};

#[derive(Debug, Clone, PartialEq)]
pub enum WeatherSource {
    /// Measured or forecast irradiance and wind speed on the scenario grid.
    Series {
        irradiance: Series,
        wind: Series,
    },
    Synthetic(WeatherParams),
}

#[derive(Debug, Clone, PartialEq)]
pub enum DemandSource {
    Series(Series),
    Profile(DemandParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub config: MicrogridConfig,
    pub weather: WeatherSource,
    pub demand: DemandSource,
    pub start: Timestamp,
    pub days: usize,
    pub step_s: i64,
    /// Seeds the synthetic weather and demand (independent streams).
    pub seed: u64,
    pub initial: BatteryState,
}

impl Scenario {
    /// Default plant, synthetic weather and demand, full bank, 10-minute grid.
    pub fn synthetic(seed: u64, start: Timestamp, days: usize) -> Self {
        let config = MicrogridConfig::default();
        Self {
            initial: BatteryState::full(&config),
            config,
            weather: WeatherSource::Synthetic(WeatherParams::default()),
            demand: DemandSource::Profile(DemandParams::default()),
            start,
            days,
            step_s: 600,
            seed,
        }
    }

    pub fn samples(&self) -> usize {
        self.days * (SECONDS_PER_DAY / self.step_s) as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepInput {
    pub irradiance: f64,
    pub wind_speed: f64,
    pub demand_kw: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepFlags {
    pub dump_load_active: bool,
    pub inverter_clipped: bool,
}

/// Energy ledger of one step, kWh. `battery_delta` is the change in stored
/// energy; `conversion_loss` is charge/discharge inefficiency. Unserved
/// demand is reported but is not part of the balance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StepEnergy {
    pub generation: f64,
    pub delivered: f64,
    pub battery_delta: f64,
    pub conversion_loss: f64,
    pub dump: f64,
    pub unserved: f64,
}

impl StepEnergy {
    /// `generation - (delivered + battery_delta + conversion_loss + dump)`.
    pub fn residual(&self) -> f64 {
        self.generation - (self.delivered + self.battery_delta + self.conversion_loss + self.dump)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub state: BatteryState,
    pub generation_kw: f64,
    pub delivered_kw: f64,
    /// Power into the bank at its terminals; negative when discharging.
    pub battery_kw: f64,
    pub dump_kw: f64,
    pub flags: StepFlags,
    pub energy: StepEnergy,
}

/// One energy-balance step of `dt_s` seconds. The load is served only if
/// the system was online at the start of the step; while off, all
/// generation goes to charging.
pub fn step(
    state: BatteryState,
    input: StepInput,
    dt_s: i64,
    config: &MicrogridConfig,
) -> Result<StepOutcome, SimError> {
    if input.demand_kw < 0.0 || input.demand_kw.is_nan() {
        return Err(SimError::NegativeInput { what: "demand", value: input.demand_kw });
    }
    let dt_h = dt_s as f64 / 3600.0;
    let gen = pv_power(input.irradiance, config)? + wind_power(input.wind_speed, config)?;
    let (request, clipped) = if state.online {
        (input.demand_kw.min(config.inverter_limit_kw), input.demand_kw > config.inverter_limit_kw)
    } else {
        (0.0, false)
    };
    let net = gen - request;
    let cap = config.battery_kwh;
    let (delivered, battery_kw, dump, loss_kw) = if net >= 0.0 {
        let headroom = (1.0 - state.soc) * cap / (config.charge_efficiency * dt_h);
        let accept = net.min(config.max_charge_kw).min(headroom);
        (request, accept, net - accept, (1.0 - config.charge_efficiency) * accept)
    } else {
        let available = state.soc * cap * config.discharge_efficiency / dt_h;
        let supply = (-net).min(available);
        let delivered = if supply == -net { request } else { gen + supply };
        (delivered, -supply, 0.0, supply * (1.0 / config.discharge_efficiency - 1.0))
    };
    let next = battery_step(state, battery_kw, dt_s, config);
    let energy = StepEnergy {
        generation: gen * dt_h,
        delivered: delivered * dt_h,
        battery_delta: (next.soc - state.soc) * cap,
        conversion_loss: loss_kw * dt_h,
        dump: dump * dt_h,
        unserved: (input.demand_kw - delivered) * dt_h,
    };
    Ok(StepOutcome {
        state: next,
        generation_kw: gen,
        delivered_kw: delivered,
        battery_kw,
        dump_kw: dump,
        flags: StepFlags { dump_load_active: dump > 0.0, inverter_clipped: clipped },
        energy,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    /// Irradiance, wind speed, served load and bus voltage. Sample `k`
    /// holds the state at the end of step `k`.
    pub frame: TelemetryFrame,
    pub truth_outages: Vec<OutageEpisode>,
    pub truth_flags: Vec<StepFlags>,
    pub energy: Vec<StepEnergy>,
    pub soc: Vec<f64>,
    pub online: Vec<bool>,
    /// Requested load, before outages and inverter limits.
    pub demand: Series,
}

/// Ground truth written next to simulated telemetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthReport {
    pub seed: u64,
    pub start: Timestamp,
    pub step_s: i64,
    pub samples: usize,
    pub outages: Vec<OutageEpisode>,
    pub offline_fraction: f64,
    pub dump_load_steps: usize,
    pub inverter_clipped_steps: usize,
    pub generation_kwh: f64,
    pub delivered_kwh: f64,
    pub unserved_kwh: f64,
    pub dump_kwh: f64,
    pub final_soc: f64,
}

impl SimResult {
    pub fn truth_report(&self, seed: u64) -> TruthReport {
        let total = |f: fn(&StepEnergy) -> f64| self.energy.iter().map(f).sum::<f64>();
        let n = self.soc.len();
        TruthReport {
            seed,
            start: self.frame.start(),
            step_s: self.frame.step(),
            samples: n,
            outages: self.truth_outages.clone(),
            offline_fraction: self.online.iter().filter(|o| !**o).count() as f64 / n as f64,
            dump_load_steps: self.truth_flags.iter().filter(|f| f.dump_load_active).count(),
            inverter_clipped_steps: self.truth_flags.iter().filter(|f| f.inverter_clipped).count(),
            generation_kwh: total(|e| e.generation),
            delivered_kwh: total(|e| e.delivered),
            unserved_kwh: total(|e| e.unserved),
            dump_kwh: total(|e| e.dump),
            final_soc: self.soc.last().copied().unwrap_or(f64::NAN),
        }
    }

    pub fn max_energy_residual(&self) -> f64 {
        self.energy.iter().map(|e| e.residual().abs()).fold(0.0, f64::max)
    }
}

fn on_grid(series: &Series, scenario: &Scenario, what: &str) -> Result<Vec<f64>, SimError> {
    let n = scenario.samples();
    if series.step() != scenario.step_s {
        return Err(SimError::SpanMismatch(format!(
            "{what} step {} s, scenario step {} s",
            series.step(),
            scenario.step_s
        )));
    }
    let end = scenario.start.plus_seconds(n as i64 * scenario.step_s);
    let (from, values) = series.window(scenario.start, end);
    if from != scenario.start || values.len() != n {
        return Err(SimError::SpanMismatch(format!(
            "{what} covers {}..{}, need {}..{}",
            series.start(),
            series.end(),
            scenario.start,
            end
        )));
    }
    values.iter().map(|v| v.ok_or_else(|| SimError::SpanMismatch(format!("{what} has gaps")))).collect()
}

/// Runs a scenario from its initial battery state.
pub fn simulate(scenario: &Scenario) -> Result<SimResult, SimError> {
    let config = &scenario.config;
    config.validate()?;
    let (start, step_s, days) = (scenario.start, scenario.step_s, scenario.days);
    if days == 0 || step_s <= 0 || SECONDS_PER_DAY % step_s != 0 {
        return Err(SimError::Params(format!("bad span: {days} days at {step_s} s")));
    }
    let (irradiance, wind) = match &scenario.weather {
        WeatherSource::Series { irradiance, wind } => {
            (on_grid(irradiance, scenario, "irradiance")?, on_grid(wind, scenario, "wind")?)
        }
        WeatherSource::Synthetic(params) => {
            let (i, w) = synthetic_weather(scenario.seed, start, days, step_s, params)?;
            (i.dense().expect("synthetic"), w.dense().expect("synthetic"))
        }
    };
    let demand = match &scenario.demand {
        DemandSource::Series(s) => on_grid(s, scenario, "demand")?,
        DemandSource::Profile(params) => {
            demand_profile(scenario.seed, start, days, step_s, params)?.dense().expect("synthetic")
        }
    };

    let n = scenario.samples();
    let mut state = scenario.initial;
    let mut load = Vec::with_capacity(n);
    let mut voltage = Vec::with_capacity(n);
    let mut soc = Vec::with_capacity(n);
    let mut online = Vec::with_capacity(n);
    let mut flags = Vec::with_capacity(n);
    let mut energy = Vec::with_capacity(n);
    for k in 0..n {
        let input = StepInput { irradiance: irradiance[k], wind_speed: wind[k], demand_kw: demand[k] };
        let out = step(state, input, step_s, config)?;
        state = out.state;
        load.push(out.delivered_kw);
        voltage.push(state.terminal_v);
        soc.push(state.soc);
        online.push(state.online);
        flags.push(out.flags);
        energy.push(out.energy);
    }

    let ts = |i: usize| start.plus_seconds(i as i64 * step_s);
    let mut truth = Vec::new();
    let mut open: Option<(usize, f64)> = None;
    for k in 0..n {
        match (open, online[k]) {
            (None, false) => open = Some((k, voltage[k])),
            (Some((s, m)), false) => open = Some((s, m.min(voltage[k]))),
            (Some((s, m)), true) => {
                truth.push(OutageEpisode::new(ts(s), ts(k), m));
                open = None;
            }
            (None, true) => {}
        }
    }
    if let Some((s, m)) = open {
        truth.push(OutageEpisode::new(ts(s), ts(n), m));
    }

    let frame = TelemetryFrame::new(
        [
            Series::from_dense(Channel::Irradiance, start, step_s, irradiance)?,
            Series::from_dense(Channel::WindSpeed, start, step_s, wind)?,
            Series::from_dense(Channel::LoadPower, start, step_s, load)?,
            Series::from_dense(Channel::DcVoltage, start, step_s, voltage)?,
        ],
        PeriodLabel::infer(start, ts(n)),
    )?;
    Ok(SimResult {
        frame,
        truth_outages: truth,
        truth_flags: flags,
        energy,
        soc,
        online,
        demand: Series::from_dense(Channel::LoadPower, start, step_s, demand)?,
    })
}
