//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero when any criterion fails.

use std::f64::consts::TAU;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mgi_core::analytics::{cross_correlation, daily_peak_offset, pearson, trend, TrendConfig};
use mgi_core::forecast::{apply_shed, fit_harmonic, outage_risk};
use mgi_core::outage::{detect_outages, outage_stats, DetectorConfig, OutageEpisode};
use mgi_core::simgrid::{
    simulate, synthetic_weather, BatteryState, DemandParams, DemandSource, MicrogridConfig, Scenario,
    WeatherParams,
};
use mgi_core::spectral::{detect_periods, dft, fft_real, SpectralOptions};
use mgi_core::{Channel, Series, Timestamp};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn within(limit: Duration, started: Instant) -> Result<Duration, String> {
    let took = started.elapsed();
    if took > limit {
        return Err(format!("took {:.1} s, limit {} s", took.as_secs_f64(), limit.as_secs()));
    }
    Ok(took)
}

fn season_start() -> Timestamp {
    Timestamp::from_ymd_hms(2018, 12, 1, 0, 0, 0)
}

// 1 -------------------------------------------------------------------------

fn naive_dft(x: &[f64]) -> Vec<(f64, f64)> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, v) in x.iter().enumerate() {
                let a = -TAU * ((k * t) % n) as f64 / n as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            (re, im)
        })
        .collect()
}

fn dft_oracle() -> Outcome {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_mag = 0.0f64;
    let mut worst_parseval = 0.0f64;
    for case in 0..200 {
        let n = rng.random_range(16..=1024usize);
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-100.0..100.0)).collect();
        let fast = fft_real(&x);
        let slow = naive_dft(&x);
        let peak = slow.iter().map(|(r, i)| r.hypot(*i)).fold(0.0, f64::max);
        for (f, (re, im)) in fast.iter().zip(&slow) {
            // Relative to the spectrum's peak: per-bin relative error of near-zero
            // bins is dominated by the oracle's own rounding.
            let err = (f.norm() - re.hypot(*im)).abs() / peak;
            worst_mag = worst_mag.max(err);
        }
        ensure!(worst_mag <= 1e-9, "case {case} (n={n}): magnitude error {worst_mag:e}");

        // The public amplitude spectrum agrees with the oracle on bins 0..=n/2.
        let s =
            Series::deviations(Channel::LoadPower, Timestamp(0), 600, x.iter().map(|v| Some(*v)).collect())
                .map_err(|e| e.to_string())?;
        let spec = dft(&s, &SpectralOptions::raw()).map_err(|e| e.to_string())?;
        for (k, m) in spec.magnitudes.iter().enumerate() {
            let (re, im) = slow[k];
            ensure!((m - re.hypot(im)).abs() / peak <= 1e-9, "case {case}: spectrum bin {k}");
        }

        let time: f64 = x.iter().map(|v| v * v).sum();
        let freq: f64 = fast.iter().map(|c| c.norm_sqr()).sum::<f64>() / n as f64;
        worst_parseval = worst_parseval.max((time - freq).abs() / time);
        ensure!(worst_parseval <= 1e-9, "case {case}: Parseval error {worst_parseval:e}");
    }
    let took = within(Duration::from_secs(30), started)?;
    Ok(format!(
        "200 series, max magnitude err {worst_mag:.1e}, max Parseval err {worst_parseval:.1e}, {:.1} s",
        took.as_secs_f64()
    ))
}

// 2 -------------------------------------------------------------------------

fn top_two(series: &Series) -> Result<Vec<f64>, String> {
    let spec = dft(series, &SpectralOptions::default()).map_err(|e| e.to_string())?;
    let mut top = detect_periods(&spec, 2, 0.0).top_periods(2);
    top.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(top)
}

fn periodicity() -> Outcome {
    let started = Instant::now();
    for seed in 0..10u64 {
        let (irr, _) = synthetic_weather(seed, season_start(), 60, 600, &WeatherParams::default())
            .map_err(|e| e.to_string())?;
        let t = top_two(&irr)?;
        ensure!(t == [24.0, 12.0], "seed {seed}: irradiance top periods {t:?}");
        let run = simulate(&Scenario::synthetic(seed, season_start(), 60)).map_err(|e| e.to_string())?;
        let load = run.frame.require(Channel::LoadPower).map_err(|e| e.to_string())?;
        let t = top_two(load)?;
        ensure!(t == [24.0, 12.0], "seed {seed}: load top periods {t:?}");
    }
    let took = within(Duration::from_secs(10), started)?;
    Ok(format!("irradiance and load top-2 = {{24 h, 12 h}} for 10 seeds, {:.1} s", took.as_secs_f64()))
}

// 3 -------------------------------------------------------------------------

/// Linear scan: per-sample state with gap handling, then maximal offline runs.
fn detector_oracle(
    v: &[Option<f64>],
    start: Timestamp,
    step: i64,
    cfg: &DetectorConfig,
) -> Vec<OutageEpisode> {
    let n = v.len();
    let long_gap = |len: usize| len as i64 * step >= cfg.min_duration_s;
    // Some(true)=online, Some(false)=offline, None=gap sample.
    let mut state: Vec<Option<bool>> = vec![None; n];
    // A long gap is a hard boundary: episodes end at its first sample.
    let mut boundary = vec![false; n];
    let mut online = true;
    let mut i = 0;
    while i < n {
        match v[i] {
            None => {
                let j = (i..n).find(|&j| v[j].is_some()).unwrap_or(n);
                if long_gap(j - i) {
                    boundary[i] = true;
                    online = true;
                }
                i = j;
            }
            Some(x) => {
                online = if online { x >= cfg.cutoff_v } else { x >= cfg.rearm_v };
                state[i] = Some(online);
                i += 1;
            }
        }
    }
    let ts = |k: usize| start.plus_seconds(k as i64 * step);
    let mut out = Vec::new();
    let mut open: Option<(usize, f64)> = None;
    for k in 0..n {
        let end_here = boundary[k] || state[k] == Some(true);
        if let (true, Some((s, m))) = (end_here, open) {
            let ep = OutageEpisode::new(ts(s), ts(k), m);
            if ep.duration_s >= cfg.min_duration_s {
                out.push(ep);
            }
            open = None;
        }
        if state[k] == Some(false) {
            let x = v[k].expect("state implies value");
            open = Some(match open {
                Some((s, m)) => (s, m.min(x)),
                None => (k, x),
            });
        }
    }
    if let Some((s, m)) = open {
        // A trailing gap counts as a boundary only when long.
        let tail = v.iter().rev().take_while(|x| x.is_none()).count();
        let end = if tail > 0 && long_gap(tail) { n - tail } else { n };
        let ep = OutageEpisode::new(ts(s), ts(end), m);
        if ep.duration_s >= cfg.min_duration_s {
            out.push(ep);
        }
    }
    out
}

fn detector_oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let start = Timestamp::from_ymd_hms(2019, 3, 1, 0, 0, 0);
    let mut episodes = 0usize;
    let mut with_gaps = 0usize;
    for case in 0..1000 {
        let n = rng.random_range(1..=10_000usize);
        let step = [60, 300, 600][rng.random_range(0..3)];
        let cutoff = rng.random_range(42.0..44.0);
        let cfg = DetectorConfig {
            cutoff_v: cutoff,
            rearm_v: cutoff + [0.0, 0.5, 1.0][rng.random_range(0..3)],
            min_duration_s: rng.random_range(0..6) * step,
        };
        let gap_rate = if case % 3 == 0 { 0.0 } else { rng.random_range(0.0..0.05) };
        // Random walk straddling both thresholds, with gap bursts.
        let mut x: f64 = rng.random_range(40.0..48.0);
        let mut v = Vec::with_capacity(n);
        let mut gap_left = 0usize;
        for _ in 0..n {
            x = (x + rng.random_range(-0.4..0.4)).clamp(39.0, 49.0);
            if gap_left == 0 && rng.random_bool(gap_rate) {
                gap_left = rng.random_range(1..8);
            }
            if gap_left > 0 {
                gap_left -= 1;
                v.push(None);
            } else {
                // Exact threshold hits exercise the comparison edges.
                let snapped = if rng.random_bool(0.02) { cfg.rearm_v } else { x };
                v.push(Some(snapped));
            }
        }
        if v.iter().any(Option::is_none) {
            with_gaps += 1;
        }
        let series = Series::new(Channel::DcVoltage, start, step, v.clone()).map_err(|e| e.to_string())?;
        let got = detect_outages(&series, &cfg).map_err(|e| e.to_string())?;
        let want = detector_oracle(&v, start, step, &cfg);
        ensure!(got == want, "case {case}: detector {} episodes, oracle {}", got.len(), want.len());
        episodes += got.len();
    }
    ensure!(episodes > 1000, "fixtures too easy: {episodes} episodes");
    Ok(format!("1000 series ({with_gaps} with gaps), {episodes} episodes, exact match"))
}

// 4 -------------------------------------------------------------------------

fn closure() -> Outcome {
    let mut total = 0usize;
    for seed in 0..20u64 {
        let mut sc = Scenario::synthetic(seed, season_start(), 45);
        sc.demand = DemandSource::Profile(DemandParams { scale: 2.5, ..Default::default() });
        let run = simulate(&sc).map_err(|e| e.to_string())?;
        let cfg = DetectorConfig {
            cutoff_v: sc.config.cutoff_v,
            rearm_v: sc.config.rearm_v,
            min_duration_s: sc.step_s,
        };
        let voltage = run.frame.require(Channel::DcVoltage).map_err(|e| e.to_string())?;
        let found = detect_outages(voltage, &cfg).map_err(|e| e.to_string())?;
        ensure!(
            found == run.truth_outages,
            "seed {seed}: detected {} episodes, truth {}",
            found.len(),
            run.truth_outages.len()
        );
        total += found.len();
    }
    ensure!(total > 0, "no outages in any scenario");
    Ok(format!("20 seeds, {total} episodes reproduced exactly"))
}

// 5 -------------------------------------------------------------------------

fn morning_outages() -> Outcome {
    let started = Instant::now();
    let seed = 2018;
    let run = |scale: f64| -> Result<mgi_core::outage::OutageStats, String> {
        let mut sc = Scenario::synthetic(seed, season_start(), 90);
        sc.demand = DemandSource::Profile(DemandParams { scale, ..Default::default() });
        let r = simulate(&sc).map_err(|e| e.to_string())?;
        outage_stats(&r.truth_outages, (r.frame.start(), r.frame.end())).map_err(|e| e.to_string())
    };
    // Outage fraction grows with demand; bisect the scale onto 20 %.
    let (mut lo, mut hi) = (1.0, 6.0);
    for _ in 0..12 {
        let mid = 0.5 * (lo + hi);
        if run(mid)?.outage_fraction < 0.20 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let scale = 0.5 * (lo + hi);
    let stats = run(scale)?;
    let fraction = stats.outage_fraction;
    ensure!((0.15..=0.25).contains(&fraction), "outage fraction {fraction:.3} at scale {scale:.3}");
    let share = stats.histogram_mass_share(3, 9);
    ensure!(share >= 0.6, "share of outage hours in 03-09: {share:.3} (fraction {fraction:.3})");
    let took = within(Duration::from_secs(20), started)?;
    Ok(format!(
        "demand x{scale:.2}: outage fraction {fraction:.3}, share in 03-09 {share:.3}, {:.1} s",
        took.as_secs_f64()
    ))
}

// 6 -------------------------------------------------------------------------

fn trend_arithmetic() -> Outcome {
    let start = Timestamp::from_ymd_hms(2019, 1, 1, 0, 0, 0);
    let hours = 365 * 24 + 366 * 24;
    let year_one = 365 * 24;
    let values: Vec<f64> = (0..hours)
        .map(|i| {
            let peak = if i < year_one { 0.7 } else { 1.2 };
            let h = (i % 24) as f64;
            peak * (0.6 + 0.4 * (TAU * (h - 20.0) / 24.0).cos())
        })
        .collect();
    let s = Series::from_dense(Channel::LoadPower, start, 3600, values).map_err(|e| e.to_string())?;
    let report = trend(&s, &TrendConfig::default()).map_err(|e| e.to_string())?;
    let maxes: Vec<f64> = report.per_year_daily_max_mean.values().copied().collect();
    ensure!(maxes.len() == 2, "years {maxes:?}");
    ensure!((maxes[0] - 0.7).abs() < 1e-12 && (maxes[1] - 1.2).abs() < 1e-12, "daily max means {maxes:?}");
    let g = report.growth_pct.ok_or("no growth reported")?;
    let oracle = (1.2 - 0.7) / 0.7 * 100.0;
    ensure!((g - 71.4286).abs() <= 0.1 && (g - oracle).abs() < 1e-9, "growth {g}");
    Ok(format!("daily-max means 0.7 -> 1.2 kW, growth {g:.4} %, about 70 %"))
}

// 7 -------------------------------------------------------------------------

fn wrap_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

fn harmonic_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let mut worst_rms = 0.0f64;
    for case in 0..100 {
        let mean = rng.random_range(-3.0..5.0);
        let (a1, a2) = (rng.random_range(0.05..4.0), rng.random_range(0.05..4.0));
        let (p1, p2) = (rng.random_range(-3.1..3.1), rng.random_range(-3.1..3.1));
        let step = [300i64, 600, 900, 3600][rng.random_range(0..4)];
        let start =
            Timestamp::from_ymd_hms(2020, 10, 1, 0, 0, 0).plus_seconds(rng.random_range(0..500) * step);
        let n = (rng.random_range(2..8) * 86_400 / step + rng.random_range(0..10)) as usize;
        let values = (0..n)
            .map(|k| {
                let h = start.plus_seconds(k as i64 * step).seconds() as f64 / 3600.0;
                Some(mean + a1 * (TAU * h / 24.0 + p1).cos() + a2 * (TAU * h / 12.0 + p2).cos())
            })
            .collect();
        let s = Series::deviations(Channel::LoadPower, start, step, values).map_err(|e| e.to_string())?;
        let m = fit_harmonic(&s, &[24.0, 12.0]).map_err(|e| format!("case {case}: {e}"))?;
        let errs = [
            (m.mean - mean).abs(),
            (m.components[0].amplitude - a1).abs(),
            (m.components[1].amplitude - a2).abs(),
            wrap_diff(m.components[0].phase, p1),
            wrap_diff(m.components[1].phase, p2),
        ];
        worst = errs.iter().copied().fold(worst, f64::max);
        worst_rms = worst_rms.max(m.residual_rms);
        ensure!(worst <= 1e-6, "case {case}: parameter error {worst:e}");
        ensure!(m.residual_rms <= 1e-9, "case {case}: residual rms {:e}", m.residual_rms);
    }

    let config = MicrogridConfig::default();
    let start = Timestamp::from_ymd_hms(2021, 1, 10, 0, 0, 0);
    for fixture in 0..10 {
        let load_kw = 0.8 + 0.35 * fixture as f64;
        let soc = 0.58 + 0.03 * fixture as f64;
        let horizon = 36 * 3600;
        let n = 36 * 6;
        let zero = |ch| Series::from_dense(ch, start, 600, vec![0.0; n]);
        let (irr, wind) = (zero(Channel::Irradiance).unwrap(), zero(Channel::WindSpeed).unwrap());
        let load = Series::from_dense(
            Channel::LoadPower,
            start,
            600,
            (0..n).map(|k| load_kw * (1.0 + 0.3 * (TAU * k as f64 / 144.0).cos())).collect(),
        )
        .map_err(|e| e.to_string())?;
        let battery = BatteryState::at_soc(soc, &config);
        let risk =
            |l: &Series| outage_risk(&irr, &wind, l, battery, &config, horizon).map_err(|e| e.to_string());
        let alerts = risk(&load)?;
        let alert = alerts.first().ok_or(format!("fixture {fixture}: deficit raised no alert"))?;
        let shed = alert.recommended_shed;
        ensure!(
            risk(&apply_shed(&load, shed))?.is_empty(),
            "fixture {fixture}: shed {shed} leaves an outage"
        );
        if shed >= 0.01 {
            ensure!(
                !risk(&apply_shed(&load, shed - 0.01))?.is_empty(),
                "fixture {fixture}: shed {shed} is not minimal"
            );
        }
    }
    Ok(format!(
        "100 signals, max parameter err {worst:.1e}, max residual rms {worst_rms:.1e}; 10 shed fixtures consistent"
    ))
}

// 8 -------------------------------------------------------------------------

fn energy_conservation() -> Outcome {
    let mut worst = 0.0f64;
    let mut steps = 0usize;
    for (seed, scale) in [(11u64, 1.0), (12, 2.5), (13, 6.0)] {
        let mut sc = Scenario::synthetic(seed, season_start(), 365);
        sc.demand = DemandSource::Profile(DemandParams { scale, ..Default::default() });
        let run = simulate(&sc).map_err(|e| e.to_string())?;
        worst = worst.max(run.max_energy_residual());
        steps += run.energy.len();
        // Independent check of the ledger against the state trajectory.
        let cap = sc.config.battery_kwh;
        let mut prev = sc.initial.soc;
        for (k, e) in run.energy.iter().enumerate() {
            let delta = (run.soc[k] - prev) * cap;
            prev = run.soc[k];
            let r = e.generation - e.delivered - delta - e.conversion_loss - e.dump;
            worst = worst.max(r.abs());
        }
    }
    ensure!(worst <= 1e-9, "max residual {worst:e} kWh");
    Ok(format!("{steps} steps over three 365-day runs, max residual {worst:.1e} kWh"))
}

// 9 -------------------------------------------------------------------------

fn correlation_pipeline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for lag in -6i64..=6 {
        let base: Vec<f64> = (0..400).map(|_| rng.random_range(-1.0..1.0)).collect();
        let n = 300usize;
        let a: Vec<Option<f64>> = (0..n).map(|t| Some(base[50 + t])).collect();
        let b: Vec<Option<f64>> = (0..n).map(|t| Some(base[(50 + t as i64 - lag) as usize])).collect();
        let mk = |v| Series::deviations(Channel::LoadPower, Timestamp(0), 600, v).unwrap();
        let res = cross_correlation(&mk(a), &mk(b), 10).map_err(|e| e.to_string())?;
        ensure!(res.lag_steps == lag, "constructed lag {lag}, recovered {}", res.lag_steps);
    }

    let a = Series::from_dense(Channel::LoadPower, Timestamp(0), 600, vec![1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
    let b = Series::from_dense(Channel::LoadPower, Timestamp(0), 600, vec![2.0, 4.0, 5.0, 4.0, 5.0]).unwrap();
    let r = pearson(&a, &b).map_err(|e| e.to_string())?;
    // cov = 6/5, var_a = 2, var_b = 6/5 => r = sqrt(0.6)
    ensure!((r - 0.6f64.sqrt()).abs() < 1e-12 && (r - 0.7746).abs() < 1e-4, "pearson {r}");

    let mut offsets = Vec::new();
    for seed in 0..5u64 {
        let (irr, wind) = synthetic_weather(seed, season_start(), 60, 600, &WeatherParams::default())
            .map_err(|e| e.to_string())?;
        let off = daily_peak_offset(&irr, &wind).map_err(|e| e.to_string())?;
        ensure!(off.abs() <= 1.0, "seed {seed}: daily peak offset {off:.2} h");
        offsets.push(format!("{off:.2}"));
    }
    Ok(format!("lags -6..6 recovered, r = {r:.4}, peak offsets [{}] h", offsets.join(", ")))
}

// 10 ------------------------------------------------------------------------

fn collect_tree(root: &Path, dir: &Path, out: &mut Vec<(PathBuf, Vec<u8>)>) {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for p in entries {
        if p.is_dir() {
            collect_tree(root, &p, out);
        } else {
            out.push((p.strip_prefix(root).unwrap().to_path_buf(), fs::read(&p).unwrap()));
        }
    }
}

fn pipeline(root: &Path) -> Result<Vec<(PathBuf, Vec<u8>)>, String> {
    fs::write(
        root.join("schema.toml"),
        "[columns]\nirradiance = \"irradiance\"\nwind_speed = \"wind_speed\"\n\
         load_power = \"load_power\"\ndc_voltage = \"dc_voltage\"\n",
    )
    .map_err(|e| e.to_string())?;
    fs::write(root.join("sim.toml"), "[demand]\nscale = 2.5\n").map_err(|e| e.to_string())?;
    let steps: [&[&str]; 4] = [
        &["simulate", "--config", "sim.toml", "--seed", "42", "--days", "60", "--out-dir", "out/sim"],
        &["ingest", "out/sim/telemetry.csv", "--schema", "schema.toml", "--out-dir", "out/frame"],
        &["analyze", "out/frame/frame.csv", "--config", "sim.toml", "--out-dir", "out/analysis"],
        &[
            "forecast",
            "out/frame/frame.csv",
            "--config",
            "sim.toml",
            "--horizon",
            "48",
            "--out-dir",
            "out/forecast",
        ],
    ];
    for args in steps {
        let o = Command::new(env!("CARGO_BIN_EXE_mgi"))
            .args(args)
            .current_dir(root)
            .env_remove("MGI_LOG")
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(o.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&o.stderr));
    }
    let mut tree = Vec::new();
    collect_tree(&root.join("out"), &root.join("out"), &mut tree);
    Ok(tree)
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let ta = pipeline(a.path())?;
    let tb = pipeline(b.path())?;
    let names = |t: &[(PathBuf, Vec<u8>)]| t.iter().map(|(p, _)| p.clone()).collect::<Vec<_>>();
    ensure!(names(&ta) == names(&tb), "file lists differ");
    for ((p, x), (_, y)) in ta.iter().zip(&tb) {
        ensure!(x == y, "{} differs", p.display());
    }
    let bytes: usize = ta.iter().map(|(_, x)| x.len()).sum();
    ensure!(ta.len() > 20, "only {} files produced", ta.len());
    Ok(format!("{} files, {bytes} bytes identical across two runs", ta.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("DFT oracle equivalence", dft_oracle),
        ("periodicity reproduction", periodicity),
        ("outage detector oracle equivalence", detector_oracle_equivalence),
        ("simulator/analyzer closure", closure),
        ("morning outage pattern", morning_outages),
        ("trend arithmetic", trend_arithmetic),
        ("harmonic fit exactness", harmonic_exactness),
        ("energy conservation", energy_conservation),
        ("correlation pipeline", correlation_pipeline),
        ("end-to-end determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
