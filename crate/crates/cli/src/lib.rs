//! Experiment runner: configuration layering, experiment dispatch and the
//! run manifest.

pub mod config;
pub mod experiments;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;

pub use config::{assemble, ExperimentConfig};
pub use experiments::{Check, Outputs};

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'static str,
    version: &'static str,
    git_describe: Option<String>,
    config: &'a ExperimentConfig,
    wall_time_s: f64,
    files: &'a [String],
    row_layout: &'a Option<String>,
    checks: &'a [Check],
    all_checks_pass: bool,
}

fn git_describe() -> Option<String> {
    let out = Command::new("git").args(["describe", "--always", "--dirty", "--tags"]).output().ok()?;
    out.status.success().then(|| String::from_utf8_lossy(&out.stdout).trim().to_string())
}

/// Runs one experiment and writes its CSV files plus `manifest.json` into
/// the configured output directory.
pub fn run(cfg: &ExperimentConfig) -> Result<Outputs> {
    let start = Instant::now();
    let outputs = experiments::run(cfg)?;
    let manifest = Manifest {
        experiment: cfg.experiment.name(),
        version: env!("CARGO_PKG_VERSION"),
        git_describe: git_describe(),
        config: cfg,
        wall_time_s: start.elapsed().as_secs_f64(),
        files: &outputs.files,
        row_layout: &outputs.row_layout,
        checks: &outputs.checks,
        all_checks_pass: outputs.checks.iter().all(|c| c.pass),
    };
    let path = Path::new(&cfg.output).join("manifest.json");
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(outputs)
}
