use super::{MicrogridConfig, SimError};

/// Array output in kW: `kwp * (G / 1000) * derate`, capped at the rating.
pub fn pv_power(irradiance: f64, config: &MicrogridConfig) -> Result<f64, SimError> {
    if irradiance < 0.0 || irradiance.is_nan() {
        return Err(SimError::NegativeInput { what: "irradiance", value: irradiance });
    }
    Ok((config.pv_kwp * irradiance / 1000.0 * config.pv_derate).min(config.pv_kwp))
}

/// Combined turbine output in kW. Cubic between cut-in and rated speed,
/// flat at rating up to cut-out, zero outside.
pub fn wind_power(speed: f64, config: &MicrogridConfig) -> Result<f64, SimError> {
    if speed < 0.0 || speed.is_nan() {
        return Err(SimError::NegativeInput { what: "wind speed", value: speed });
    }
    let rated = config.n_turbines as f64 * config.turbine_rated_kw;
    let (ci, vr, co) = (config.cut_in, config.rated_speed, config.cut_out);
    Ok(if speed < ci || speed > co {
        0.0
    } else if speed >= vr {
        rated
    } else {
        rated * (speed.powi(3) - ci.powi(3)) / (vr.powi(3) - ci.powi(3))
    })
}
