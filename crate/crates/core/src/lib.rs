//! Telemetry analytics and energy-balance simulation for islanded
//! PV-wind-battery microgrids.
//!
//! The crate is organised by pipeline stage:
//!
//! - [`telemetry`]: channel data model, CSV ingestion, cleaning, resampling
//!   and period slicing.
//! - [`outage`]: outage detection from battery DC voltage, statistics and
//!   cause attribution.
//! - [`spectral`]: DFT, periodogram, autocorrelation and period detection.
//! - [`analytics`]: typical-day profiles, seasonal adjustment, load trend,
//!   anomalies and correlation.
//! - [`forecast`]: harmonic regression, prediction and outage-risk alerts.
//! - [`simgrid`]: discrete-time simulator producing labelled telemetry.

pub mod analytics;
pub mod forecast;
mod linalg;
pub mod outage;
pub mod simgrid;
pub mod spectral;
pub mod telemetry;
pub mod time;

pub use telemetry::{Channel, Series, TelemetryFrame};
pub use time::Timestamp;
