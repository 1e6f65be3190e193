use serde::{Deserialize, Serialize};

use super::{DemandParams, SimError, WeatherParams};
use crate::time::Timestamp;

/// Ratings and battery model of the simulated plant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MicrogridConfig {
    pub pv_kwp: f64,
    pub pv_derate: f64,
    pub n_turbines: u32,
    pub turbine_rated_kw: f64,
    /// m/s
    pub cut_in: f64,
    pub rated_speed: f64,
    pub cut_out: f64,
    pub battery_kwh: f64,
    /// Fraction of capacity usable above the cutoff; the open-circuit
    /// voltage reaches `cutoff_v` at `soc = 1 - usable_depth`.
    pub usable_depth: f64,
    pub charge_efficiency: f64,
    pub discharge_efficiency: f64,
    /// Open-circuit voltage of a full bank.
    pub ocv_full_v: f64,
    /// Terminal voltage shift per kW of battery power (+ charging, - discharging).
    pub terminal_v_per_kw: f64,
    pub max_charge_kw: f64,
    /// Combined AC output ceiling of the inverter/chargers.
    pub inverter_limit_kw: f64,
    pub bus_nominal_v: f64,
    pub cutoff_v: f64,
    pub rearm_v: f64,
}

impl Default for MicrogridConfig {
    fn default() -> Self {
        Self {
            pv_kwp: 6.0,
            pv_derate: 0.85,
            n_turbines: 2,
            turbine_rated_kw: 3.0,
            cut_in: 3.0,
            rated_speed: 12.0,
            cut_out: 25.0,
            battery_kwh: 38.4,
            usable_depth: 0.5,
            charge_efficiency: 0.90,
            discharge_efficiency: 0.95,
            ocv_full_v: 47.0,
            terminal_v_per_kw: 0.125,
            max_charge_kw: 6.0,
            inverter_limit_kw: 8.0,
            bus_nominal_v: 48.0,
            cutoff_v: 43.0,
            rearm_v: 44.0,
        }
    }
}

impl MicrogridConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        let err = |m: &str| Err(SimError::Config(m.to_string()));
        let positive = [
            ("pv_kwp", self.pv_kwp),
            ("turbine_rated_kw", self.turbine_rated_kw),
            ("battery_kwh", self.battery_kwh),
            ("max_charge_kw", self.max_charge_kw),
            ("inverter_limit_kw", self.inverter_limit_kw),
            ("bus_nominal_v", self.bus_nominal_v),
        ];
        if let Some((name, _)) = positive.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(SimError::Config(format!("{name} must be positive")));
        }
        if !(self.cut_in >= 0.0 && self.cut_in < self.rated_speed && self.rated_speed < self.cut_out) {
            return err("need 0 <= cut_in < rated_speed < cut_out");
        }
        if !(self.usable_depth > 0.0 && self.usable_depth <= 1.0) {
            return err("usable_depth must be in (0, 1]");
        }
        for (name, eta) in [
            ("pv_derate", self.pv_derate),
            ("charge_efficiency", self.charge_efficiency),
            ("discharge_efficiency", self.discharge_efficiency),
        ] {
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(SimError::Config(format!("{name} must be in (0, 1]")));
            }
        }
        if !(self.terminal_v_per_kw >= 0.0) {
            return err("terminal_v_per_kw must be non-negative");
        }
        if !(self.cutoff_v > 0.0 && self.cutoff_v < self.rearm_v && self.rearm_v < self.ocv_full_v) {
            return err("need 0 < cutoff_v < rearm_v < ocv_full_v");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationSection {
    pub start: Timestamp,
    pub step_minutes: i64,
    pub initial_soc: f64,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self { start: Timestamp::from_ymd_hms(2018, 12, 1, 0, 0, 0), step_minutes: 10, initial_soc: 1.0 }
    }
}

/// Everything a simulation config file can set. Plant keys live in the
/// `[pv]`, `[wind]`, `[battery]` and `[inverter]` sections under their
/// [`MicrogridConfig`] field names.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimFile {
    pub microgrid: MicrogridConfig,
    pub weather: WeatherParams,
    pub demand: DemandParams,
    pub simulation: SimulationSection,
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("pv", &["pv_kwp", "pv_derate"]),
    ("wind", &["n_turbines", "turbine_rated_kw", "cut_in", "rated_speed", "cut_out"]),
    (
        "battery",
        &[
            "battery_kwh",
            "usable_depth",
            "charge_efficiency",
            "discharge_efficiency",
            "ocv_full_v",
            "terminal_v_per_kw",
            "max_charge_kw",
            "bus_nominal_v",
            "cutoff_v",
            "rearm_v",
        ],
    ),
    ("inverter", &["inverter_limit_kw"]),
];

impl SimFile {
    pub fn from_toml(text: &str) -> Result<Self, SimError> {
        let cfg_err = |e: &dyn std::fmt::Display| SimError::Config(e.to_string());
        let mut root: toml::Table = text.parse().map_err(|e| cfg_err(&e))?;
        let mut flat = toml::Table::new();
        for (section, keys) in SECTIONS {
            let Some(value) = root.remove(*section) else { continue };
            let toml::Value::Table(table) = value else {
                return Err(SimError::Config(format!("[{section}] must be a table")));
            };
            for (k, v) in table {
                if !keys.contains(&k.as_str()) {
                    return Err(SimError::Config(format!("unknown key {k:?} in [{section}]")));
                }
                flat.insert(k, v);
            }
        }
        let take = |root: &mut toml::Table, name: &str| {
            root.remove(name).unwrap_or(toml::Value::Table(Default::default()))
        };
        let weather: WeatherParams = take(&mut root, "weather").try_into().map_err(|e| cfg_err(&e))?;
        let demand: DemandParams = take(&mut root, "demand").try_into().map_err(|e| cfg_err(&e))?;
        let simulation: SimulationSection =
            take(&mut root, "simulation").try_into().map_err(|e| cfg_err(&e))?;
        if let Some(k) = root.keys().next() {
            return Err(SimError::Config(format!("unknown section [{k}]")));
        }
        let microgrid: MicrogridConfig = toml::Value::Table(flat).try_into().map_err(|e| cfg_err(&e))?;
        microgrid.validate()?;
        weather.validate()?;
        demand.validate()?;
        if simulation.step_minutes <= 0 || 1440 % simulation.step_minutes != 0 {
            return Err(SimError::Config("step_minutes must divide a day".into()));
        }
        if !(0.0..=1.0).contains(&simulation.initial_soc) {
            return Err(SimError::Config("initial_soc must be in [0, 1]".into()));
        }
        Ok(Self { microgrid, weather, demand, simulation })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        MicrogridConfig::default().validate().unwrap();
        assert_eq!(SimFile::from_toml("").unwrap(), SimFile::default());
    }

    #[test]
    fn sections_override_fields() {
        let f = SimFile::from_toml(
            "[pv]\npv_kwp = 3.0\n[battery]\nbattery_kwh = 19.2\ncutoff_v = 42.0\n\
             [inverter]\ninverter_limit_kw = 4.0\n[demand]\nscale = 2.0\n\
             [simulation]\nstart = \"2020-10-01T00:00:00\"\n",
        )
        .unwrap();
        assert_eq!(f.microgrid.pv_kwp, 3.0);
        assert_eq!(f.microgrid.battery_kwh, 19.2);
        assert_eq!(f.microgrid.cutoff_v, 42.0);
        assert_eq!(f.microgrid.inverter_limit_kw, 4.0);
        assert_eq!(f.microgrid.n_turbines, 2);
        assert_eq!(f.demand.scale, 2.0);
        assert_eq!(f.simulation.start.to_string(), "2020-10-01T00:00:00");
    }

    #[test]
    fn rejects_bad_files() {
        assert!(SimFile::from_toml("[pv]\nbattery_kwh = 1.0\n").is_err());
        assert!(SimFile::from_toml("[solar]\npv_kwp = 1.0\n").is_err());
        assert!(SimFile::from_toml("[wind]\ncut_in = 13.0\n").is_err());
        assert!(SimFile::from_toml("[battery]\nrearm_v = 42.0\n").is_err());
        assert!(SimFile::from_toml("[battery]\nusable_depth = 0.0\n").is_err());
        assert!(SimFile::from_toml("not toml ===").is_err());
        assert!(SimFile::from_toml("[simulation]\nstep_minutes = 7\n").is_err());
    }
}
