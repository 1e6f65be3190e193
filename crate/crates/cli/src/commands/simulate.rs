use mgi_core::simgrid::{simulate, BatteryState, DemandSource, Scenario, WeatherSource};

use super::{frame_csv, load_config, step_seconds};
use crate::args::SimulateArgs;
use crate::manifest::{OutputDir, RunManifest};
use crate::CliError;

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let file = load_config(args.config.as_deref())?;
    if args.days == 0 {
        return Err(CliError::Usage("--days must be positive".into()));
    }
    let step_s = step_seconds(args.step.unwrap_or(file.simulation.step_minutes))?;
    let scenario = Scenario {
        initial: BatteryState::at_soc(file.simulation.initial_soc, &file.microgrid),
        config: file.microgrid,
        weather: WeatherSource::Synthetic(file.weather),
        demand: DemandSource::Profile(file.demand),
        start: file.simulation.start,
        days: args.days,
        step_s,
        seed: args.seed,
    };
    let result = simulate(&scenario)?;
    let truth = result.truth_report(args.seed);
    log::info!("{} outages, offline fraction {:.3}", truth.outages.len(), truth.offline_fraction);

    let mut flags = String::from("timestamp,online,soc,dump_load_active,inverter_clipped,demand_kw\n");
    for (i, f) in result.truth_flags.iter().enumerate() {
        flags.push_str(&format!(
            "{},{},{},{},{},{}\n",
            result.demand.timestamp(i),
            u8::from(result.online[i]),
            result.soc[i],
            u8::from(f.dump_load_active),
            u8::from(f.inverter_clipped),
            result.demand.values()[i].unwrap_or(0.0),
        ));
    }

    let mut manifest = RunManifest::new("simulate");
    manifest.config_path = args.config.clone();
    manifest.seed = Some(args.seed);
    let mut out = OutputDir::create(&args.out_dir, manifest)?;
    out.write("telemetry.csv", frame_csv(&result.frame)?)?;
    out.write_json("truth.json", &truth)?;
    out.write("truth_flags.csv", flags)?;
    out.finish()?;
    Ok(())
}
