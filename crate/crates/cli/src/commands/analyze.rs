use serde::Serialize;

use mgi_core::analytics::{
    correlate, detect_anomalies, seasonal_adjust, trend, typical_day, weekly_profile, Anomaly, AnomalyKind,
    Baseline, CorrelationOptions, CorrelationReport, DailyProfile, TrendConfig,
};
use mgi_core::outage::{
    attribute_cause, detect_outages, outage_stats, AttributionConfig, CauseAttribution, DetectorConfig,
    OutageEpisode,
};
use mgi_core::spectral::{autocorrelation, detect_periods, dft, PeriodicityReport, SpectralOptions};
use mgi_core::{Channel, TelemetryFrame, Timestamp};

use super::{load_config, read_frame};
use crate::args::AnalyzeArgs;
use crate::manifest::{OutputDir, RunManifest};
use crate::{Analysis, CliError};

const ACF_MAX_LAG_S: i64 = 72 * 3600;
const TOP_PERIODS: usize = 5;
const ANOMALY_Z: f64 = 4.0;

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

#[derive(Serialize)]
struct OutagesArtifact {
    cutoff_v: f64,
    rearm_v: f64,
    min_duration_s: i64,
    span_start: Timestamp,
    span_end: Timestamp,
    outage_fraction: f64,
    morning_share_3_9: f64,
    hour_histogram: [u32; 24],
    episodes: Vec<OutageEpisode>,
    /// Episodes without enough preceding data are not attributed.
    attributions: Vec<CauseAttribution>,
}

#[derive(Serialize)]
struct ChannelPeriods {
    channel: Channel,
    samples: usize,
    #[serde(flatten)]
    report: PeriodicityReport,
}

#[derive(Serialize)]
struct SeasonalSummary {
    channel: Channel,
    samples: usize,
    adjusted_mean: Option<f64>,
    adjusted_rms: Option<f64>,
}

#[derive(Serialize)]
struct Pair {
    a: Channel,
    b: Channel,
    #[serde(flatten)]
    report: CorrelationReport,
}

pub fn run(args: &AnalyzeArgs) -> Result<(), CliError> {
    let (analyses, explicit) = match &args.analyses {
        Some(list) => (Analysis::parse_list(list).map_err(CliError::Usage)?, true),
        None => (Analysis::ALL.to_vec(), false),
    };
    let file = load_config(args.config.as_deref())?;
    let frame = read_frame(&args.frame)?;

    let mut manifest = RunManifest::new("analyze");
    manifest.config_path = args.config.clone();
    manifest.inputs.push(args.frame.clone());
    let mut out = OutputDir::create(&args.out_dir, manifest)?;
    let detector = DetectorConfig {
        cutoff_v: file.microgrid.cutoff_v,
        rearm_v: file.microgrid.rearm_v,
        ..Default::default()
    };
    for a in analyses {
        log::info!("running {a}");
        let res = match a {
            Analysis::Outages => outages(&frame, &detector, &mut out),
            Analysis::Spectrum => spectrum(&frame, &mut out),
            Analysis::Acf => acf(&frame, &mut out),
            Analysis::TypicalDay => profiles(&frame, &mut out),
            Analysis::Seasonal => seasonal(&frame, &mut out),
            Analysis::Trend => load_trend(&frame, &mut out),
            Analysis::Correlate => correlation(&frame, &mut out),
            Analysis::Anomalies => anomalies(&frame, &mut out),
        };
        match res {
            Err(CliError::Precondition(msg)) if !explicit => log::warn!("skipping {a}: {msg}"),
            other => other?,
        }
    }
    out.finish()?;
    Ok(())
}

fn outages(frame: &TelemetryFrame, detector: &DetectorConfig, out: &mut OutputDir) -> Result<(), CliError> {
    let voltage = frame.require(Channel::DcVoltage)?;
    let episodes = detect_outages(voltage, detector).map_err(pre)?;
    let stats = outage_stats(&episodes, (frame.start(), frame.end())).map_err(pre)?;
    let config = AttributionConfig::default();
    let attributions = episodes.iter().filter_map(|ep| attribute_cause(ep, frame, &config).ok()).collect();
    let artifact = OutagesArtifact {
        cutoff_v: detector.cutoff_v,
        rearm_v: detector.rearm_v,
        min_duration_s: detector.min_duration_s,
        span_start: frame.start(),
        span_end: frame.end(),
        outage_fraction: stats.outage_fraction,
        morning_share_3_9: stats.histogram_mass_share(3, 9),
        hour_histogram: stats.hour_histogram,
        episodes,
        attributions,
    };
    out.write_json("outages.json", &artifact)?;
    out.write("outage_hist.csv", stats.histogram_csv())
}

fn spectrum(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let mut reports = Vec::new();
    for s in frame.iter() {
        let spec = dft(s, &SpectralOptions::default()).map_err(pre)?;
        out.write(&format!("spectrum_{}.csv", s.channel().name()), spec.to_csv())?;
        reports.push(ChannelPeriods {
            channel: s.channel(),
            samples: s.len(),
            report: detect_periods(&spec, TOP_PERIODS, 0.0),
        });
    }
    out.write_json("spectrum.json", &reports)
}

fn acf(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let mut reports = Vec::new();
    for s in frame.iter() {
        let max_lag = ACF_MAX_LAG_S.min(s.span_seconds() / 2);
        let points = autocorrelation(s, max_lag).map_err(pre)?;
        let mut csv = String::from("lag_hours,r\n");
        for p in &points {
            csv.push_str(&format!("{},{}\n", p.lag_hours(), p.r));
        }
        out.write(&format!("acf_{}.csv", s.channel().name()), csv)?;
        reports.push(ChannelPeriods {
            channel: s.channel(),
            samples: s.len(),
            report: PeriodicityReport::default().with_acf(&points, TOP_PERIODS),
        });
    }
    out.write_json("acf.json", &reports)
}

fn profiles(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let mut all: Vec<DailyProfile> = Vec::new();
    for s in frame.iter() {
        let p = typical_day(s).map_err(pre)?;
        out.write(&format!("typical_day_{}.csv", s.channel().name()), p.to_csv())?;
        all.push(p);
    }
    if let Some(load) = frame.get(Channel::LoadPower) {
        let week = weekly_profile(load).map_err(pre)?;
        let mut csv = String::from("weekday,slot,mean,count\n");
        for (d, p) in week.iter().enumerate() {
            for (k, m) in p.slot_means.iter().enumerate() {
                let m = m.map(|v| v.to_string()).unwrap_or_default();
                csv.push_str(&format!("{d},{k},{m},{}\n", p.slot_counts[k]));
            }
        }
        out.write("typical_week_load_power.csv", csv)?;
    }
    out.write_json("typical_day.json", &all)
}

fn seasonal(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let mut summaries = Vec::new();
    for s in frame.iter() {
        let adj = seasonal_adjust(s).map_err(pre)?;
        let name = s.channel().name();
        let mut csv = format!("timestamp,{name},{name}_adjusted\n");
        for (i, (v, a)) in s.values().iter().zip(adj.values()).enumerate() {
            let f = |x: &Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            csv.push_str(&format!("{},{},{}\n", s.timestamp(i), f(v), f(a)));
        }
        out.write(&format!("seasonal_{name}.csv"), csv)?;
        let present: Vec<f64> = adj.present().map(|(_, v)| v).collect();
        let n = present.len() as f64;
        let (mean, rms) = if present.is_empty() {
            (None, None)
        } else {
            (
                Some(present.iter().sum::<f64>() / n),
                Some((present.iter().map(|v| v * v).sum::<f64>() / n).sqrt()),
            )
        };
        summaries.push(SeasonalSummary {
            channel: s.channel(),
            samples: s.len(),
            adjusted_mean: mean,
            adjusted_rms: rms,
        });
    }
    out.write_json("seasonal.json", &summaries)
}

fn load_trend(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let load = frame.require(Channel::LoadPower)?;
    let report = trend(load, &TrendConfig::default()).map_err(pre)?;
    out.write("trend.csv", report.to_csv())?;
    out.write_json("trend.json", &report)
}

fn correlation(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let pairs = [
        (Channel::Irradiance, Channel::WindSpeed),
        (Channel::Irradiance, Channel::LoadPower),
        (Channel::WindSpeed, Channel::LoadPower),
    ];
    let options = CorrelationOptions::default();
    let mut reports = Vec::new();
    let mut csv = String::from("a,b,pearson_r,best_lag_s,r_at_best_lag,daily_peak_offset_h\n");
    for (a, b) in pairs {
        let (Some(sa), Some(sb)) = (frame.get(a), frame.get(b)) else { continue };
        let r = correlate(sa, sb, &options).map_err(pre)?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            a.name(),
            b.name(),
            r.pearson_r,
            r.best_lag_s,
            r.r_at_best_lag,
            r.daily_peak_offset_h
        ));
        reports.push(Pair { a, b, report: r });
    }
    if reports.is_empty() {
        return Err(pre("correlation needs at least two of irradiance, wind speed and load"));
    }
    out.write("correlation.csv", csv)?;
    out.write_json("correlation.json", &reports)
}

fn anomalies(frame: &TelemetryFrame, out: &mut OutputDir) -> Result<(), CliError> {
    let mut all: Vec<Anomaly> = Vec::new();
    for s in frame.iter() {
        all.extend(detect_anomalies(s, ANOMALY_Z, Baseline::PerSlot).map_err(pre)?);
    }
    let mut csv = String::from("timestamp,channel,value,zscore,kind\n");
    for a in &all {
        let kind = match a.kind {
            AnomalyKind::Spike => "spike",
            AnomalyKind::Drop => "drop",
        };
        csv.push_str(&format!("{},{},{},{},{kind}\n", a.timestamp, a.channel.name(), a.value, a.zscore));
    }
    out.write("anomalies.csv", csv)?;
    out.write_json("anomalies.json", &all)
}
