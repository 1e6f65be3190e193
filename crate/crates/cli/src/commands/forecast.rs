use serde::Serialize;

use mgi_core::forecast::{
    alerts_text, fit_harmonic, outage_risk, predict, HarmonicModel, DEFAULT_PERIODS_HOURS,
};
use mgi_core::simgrid::BatteryState;
use mgi_core::{Channel, Series, Timestamp};

use super::{load_config, read_frame, series_csv, step_seconds};
use crate::args::ForecastArgs;
use crate::manifest::{OutputDir, RunManifest};
use crate::CliError;

/// Models are fitted on at most this much of the frame's tail.
const FIT_WINDOW_S: i64 = 7 * 86_400;

#[derive(Serialize)]
struct AlertsArtifact {
    forecast_start: Timestamp,
    horizon_s: i64,
    initial_soc: f64,
    initial_voltage: Option<f64>,
    alerts: Vec<mgi_core::forecast::OutageAlert>,
}

pub fn run(args: &ForecastArgs) -> Result<(), CliError> {
    if args.horizon <= 0 {
        return Err(CliError::Usage("--horizon must be positive".into()));
    }
    let file = load_config(args.config.as_deref())?;
    let frame = read_frame(&args.frame)?;
    let step_s = match args.step {
        Some(m) => step_seconds(m)?,
        None => frame.step(),
    };
    let horizon_s = args.horizon * 3600;
    let from = frame.start().max(frame.end().plus_seconds(-FIT_WINDOW_S));
    let fit_frame = frame.slice_period(from, frame.end())?;
    let origin = frame.end();

    let mut manifest = RunManifest::new("forecast");
    manifest.config_path = args.config.clone();
    manifest.inputs.push(args.frame.clone());
    let mut out = OutputDir::create(&args.out_dir, manifest)?;

    let mut forecasts: Vec<Series> = Vec::new();
    for ch in [Channel::Irradiance, Channel::WindSpeed, Channel::LoadPower] {
        let series = fit_frame.require(ch)?;
        let model: HarmonicModel = fit_harmonic(series, &DEFAULT_PERIODS_HOURS)?;
        log::info!("{ch}: mean {:.3}, residual rms {:.3}", model.mean, model.residual_rms);
        let f = predict(&model, origin, horizon_s, step_s)?;
        out.write_json(&format!("model_{}.json", ch.name()), &model)?;
        out.write(&format!("forecast_{}.csv", ch.name()), series_csv(&f)?)?;
        forecasts.push(f);
    }

    let last_v = frame.get(Channel::DcVoltage).and_then(|v| v.values().iter().rev().find_map(|x| *x));
    let battery = match last_v {
        Some(v) => BatteryState::from_rest_voltage(v, &file.microgrid),
        None => BatteryState::full(&file.microgrid),
    };
    let alerts =
        outage_risk(&forecasts[0], &forecasts[1], &forecasts[2], battery, &file.microgrid, horizon_s)?;
    out.write("alerts.txt", alerts_text(&alerts))?;
    out.write_json(
        "alerts.json",
        &AlertsArtifact {
            forecast_start: origin,
            horizon_s,
            initial_soc: battery.soc,
            initial_voltage: last_v,
            alerts,
        },
    )?;
    out.finish()?;
    Ok(())
}
