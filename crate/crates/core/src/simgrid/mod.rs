//! Discrete-time energy-balance simulator of an islanded hybrid microgrid:
//! a PV array and wind turbines charging a lead-acid bank on a 48 V DC bus,
//! with inverter/chargers serving the community load.
//!
//! The simulator is the labelled data source for the analysis pipeline: it
//! records the same four channels a field datalogger would, together with
//! the ground-truth outage intervals.

mod battery;
mod config;
mod demand;
mod power;
mod sim;
mod weather;

pub use battery::{battery_step, ocv, BatteryState};
pub use config::{MicrogridConfig, SimFile, SimulationSection};
pub use demand::{demand_profile, DemandParams};
pub use power::{pv_power, wind_power};
pub use sim::{
    simulate, step, DemandSource, Scenario, SimResult, StepEnergy, StepFlags, StepInput, StepOutcome,
    TruthReport, WeatherSource,
};
pub use weather::{synthetic_weather, WeatherParams};

use crate::telemetry::TelemetryError;

#[derive(Debug, thiserror::Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("negative {what}: {value}")]
    NegativeInput { what: &'static str, value: f64 },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("inputs do not cover the simulated span: {0}")]
    SpanMismatch(String),
    #[error(transparent)]
    Telemetry(#[from] TelemetryError),
}
