//! CSV results and the JSON metadata sidecar.

use std::path::{Path, PathBuf};
use std::process::Command;

use fermi_bridge::simulate::RNG_SCHEME;
use serde::Serialize;

use crate::config::ExperimentConfig;
use crate::run::Table;

pub fn write_csv(path: &Path, table: &Table) -> Result<(), String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    w.write_record(&table.header).map_err(|e| e.to_string())?;
    for row in &table.rows {
        w.write_record(row.iter().map(|c| c.render())).map_err(|e| e.to_string())?;
    }
    w.flush().map_err(|e| format!("{}: {e}", path.display()))
}

/// `results.csv` becomes `results.meta.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

#[derive(Serialize)]
struct Metadata<'a> {
    config: &'a ExperimentConfig,
    seed: u64,
    workers: usize,
    git_describe: Option<String>,
    wall_time_seconds: f64,
    rng_scheme: &'static str,
    version: &'static str,
    verification_passed: bool,
}

fn git_describe() -> Option<String> {
    let out = Command::new("git").args(["describe", "--always", "--dirty", "--tags"]).output().ok()?;
    out.status.success().then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}

pub fn write_metadata(path: &Path, cfg: &ExperimentConfig, wall: f64, passed: bool) -> Result<(), String> {
    let meta = Metadata {
        config: cfg,
        seed: cfg.seed,
        workers: cfg.workers,
        git_describe: git_describe(),
        wall_time_seconds: wall,
        rng_scheme: RNG_SCHEME,
        version: env!("CARGO_PKG_VERSION"),
        verification_passed: passed,
    };
    let text = serde_json::to_string_pretty(&meta).map_err(|e| e.to_string())?;
    std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}
