use serde::{Deserialize, Serialize};

use super::MicrogridConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatteryState {
    pub soc: f64,
    pub terminal_v: f64,
    /// False while the system sits in low-voltage cutoff.
    pub online: bool,
}

/// Open-circuit voltage. Linear in soc, reaching `cutoff_v` once the usable
/// depth is spent and `ocv_full_v` at full charge.
pub fn ocv(soc: f64, config: &MicrogridConfig) -> f64 {
    let floor = 1.0 - config.usable_depth;
    config.cutoff_v + (config.ocv_full_v - config.cutoff_v) * (soc - floor) / config.usable_depth
}

/// Inverse of [`ocv`], clamped to `[0, 1]`.
pub fn soc_from_ocv(voltage: f64, config: &MicrogridConfig) -> f64 {
    let floor = 1.0 - config.usable_depth;
    let soc =
        floor + (voltage - config.cutoff_v) * config.usable_depth / (config.ocv_full_v - config.cutoff_v);
    soc.clamp(0.0, 1.0)
}

impl BatteryState {
    /// Resting bank at `soc`; online if the resting voltage clears the cutoff.
    pub fn at_soc(soc: f64, config: &MicrogridConfig) -> Self {
        let soc = soc.clamp(0.0, 1.0);
        let v = ocv(soc, config);
        Self { soc, terminal_v: v, online: v >= config.cutoff_v }
    }

    pub fn full(config: &MicrogridConfig) -> Self {
        Self::at_soc(1.0, config)
    }

    /// Estimates the state from a measured bus voltage, treating it as
    /// the open-circuit value.
    pub fn from_rest_voltage(voltage: f64, config: &MicrogridConfig) -> Self {
        let mut s = Self::at_soc(soc_from_ocv(voltage, config), config);
        s.online = voltage >= config.cutoff_v;
        s
    }

    /// Stored energy above empty, kWh.
    pub fn energy_kwh(&self, config: &MicrogridConfig) -> f64 {
        self.soc * config.battery_kwh
    }
}

/// Advances the bank by `dt_s` seconds at `net_kw` measured at the battery
/// terminals (positive charging). Charging stores `eta_c * net`; a discharge
/// of `net` draws `net / eta_d` from storage. Saturates at empty and full.
pub fn battery_step(state: BatteryState, net_kw: f64, dt_s: i64, config: &MicrogridConfig) -> BatteryState {
    debug_assert!(dt_s > 0);
    let dt_h = dt_s as f64 / 3600.0;
    let stored = if net_kw >= 0.0 {
        config.charge_efficiency * net_kw * dt_h
    } else {
        net_kw * dt_h / config.discharge_efficiency
    };
    let soc = (state.soc + stored / config.battery_kwh).clamp(0.0, 1.0);
    let terminal_v = ocv(soc, config) + config.terminal_v_per_kw * net_kw;
    let online = if state.online { terminal_v >= config.cutoff_v } else { terminal_v >= config.rearm_v };
    BatteryState { soc, terminal_v, online }
}
