use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::args::ReportArgs;
use crate::manifest::{RunManifest, MANIFEST_NAME};
use crate::CliError;

/// Headline numbers pulled from known artifacts, keyed by file name.
const HEADLINES: &[(&str, &[&str])] = &[
    ("outages.json", &["outage_fraction", "morning_share_3_9"]),
    ("truth.json", &["offline_fraction", "unserved_kwh", "dump_kwh", "final_soc"]),
    ("trend.json", &["growth_pct", "slope"]),
    ("clean_report.json", &["rows_total", "rows_dropped", "cells_nullified"]),
];

#[derive(Serialize)]
struct RunSummary {
    dir: PathBuf,
    manifest: RunManifest,
    missing_outputs: Vec<PathBuf>,
    headlines: BTreeMap<String, Value>,
}

fn find_manifests(dir: &Path, found: &mut Vec<PathBuf>) -> Result<(), CliError> {
    let mut entries: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .map(|e| e.map(|e| e.path()).map_err(|e| CliError::io(dir, e)))
        .collect::<Result<_, _>>()?;
    entries.sort();
    for path in entries {
        if path.is_dir() {
            find_manifests(&path, found)?;
        } else if path.file_name().is_some_and(|n| n == MANIFEST_NAME) {
            found.push(path);
        }
    }
    Ok(())
}

fn headlines(dir: &Path, manifest: &RunManifest) -> BTreeMap<String, Value> {
    let mut out = BTreeMap::new();
    for (file, keys) in HEADLINES {
        if !manifest.outputs.iter().any(|o| o == Path::new(file)) {
            continue;
        }
        let Ok(text) = std::fs::read_to_string(dir.join(file)) else { continue };
        let Ok(json) = serde_json::from_str::<Value>(&text) else { continue };
        for key in *keys {
            if let Some(v) = json.get(key) {
                out.insert(format!("{}.{key}", file.trim_end_matches(".json")), v.clone());
            }
        }
        if *file == "outages.json" {
            if let Some(eps) = json.get("episodes").and_then(Value::as_array) {
                out.insert("outages.count".into(), eps.len().into());
            }
        }
        if *file == "truth.json" {
            if let Some(eps) = json.get("outages").and_then(Value::as_array) {
                out.insert("truth.outage_count".into(), eps.len().into());
            }
        }
    }
    if manifest.outputs.iter().any(|o| o == Path::new("spectrum.json")) {
        if let Ok(json) = std::fs::read_to_string(dir.join("spectrum.json"))
            .map_err(|_| ())
            .and_then(|t| serde_json::from_str::<Value>(&t).map_err(|_| ()))
        {
            for ch in json.as_array().into_iter().flatten() {
                let name = ch.get("channel").and_then(Value::as_str).unwrap_or("?");
                let periods: Vec<Value> = ch
                    .get("peaks")
                    .and_then(Value::as_array)
                    .into_iter()
                    .flatten()
                    .take(2)
                    .filter_map(|p| p.get("period_hours").cloned())
                    .collect();
                out.insert(format!("spectrum.{name}.top_periods_h"), Value::Array(periods));
            }
        }
    }
    if manifest.outputs.iter().any(|o| o == Path::new("alerts.txt")) {
        if let Ok(text) = std::fs::read_to_string(dir.join("alerts.txt")) {
            out.insert("alerts.count".into(), text.lines().count().into());
        }
    }
    out
}

pub fn run(args: &ReportArgs) -> Result<(), CliError> {
    let mut manifests = Vec::new();
    find_manifests(&args.dir, &mut manifests)?;
    if manifests.is_empty() {
        return Err(CliError::Precondition(format!("no {MANIFEST_NAME} under {}", args.dir.display())));
    }
    let mut runs = Vec::new();
    for path in manifests {
        let manifest = RunManifest::read(&path)?;
        let dir = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        let missing_outputs = manifest.outputs.iter().filter(|o| !dir.join(o).exists()).cloned().collect();
        let headlines = headlines(&dir, &manifest);
        let rel = dir.strip_prefix(&args.dir).unwrap_or(&dir).to_path_buf();
        runs.push(RunSummary { dir: rel, manifest, missing_outputs, headlines });
    }
    super::print_json(&runs)
}
