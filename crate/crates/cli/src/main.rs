use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::Parser;

/// Runs a random-Lindbladian experiment and writes CSV output plus a manifest.
#[derive(Parser, Debug)]
#[command(name = "randlind", version)]
struct Args {
    /// spectrum-scatter, gap-scaling, dff-compare, density, gap-curve,
    /// lemma-check, moment-check, self-averaging or specfun-check
    #[arg(long)]
    experiment: Option<String>,
    /// JSON configuration file; flags and --set override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Override one entry, e.g. --set n=32 or --set times.max=10.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    output: Option<String>,
}

fn main() -> Result<()> {
    let args = Args::parse();
    let file = match &args.config {
        Some(p) => Some(std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?),
        None => None,
    };
    let cfg = randlind_cli::assemble(
        file.as_deref(),
        args.experiment.as_deref(),
        &args.sets,
        args.seed,
        args.output.as_deref(),
    )?;
    let out = randlind_cli::run(&cfg)?;
    for f in &out.files {
        println!("wrote {}", cfg.output.join(f).display());
    }
    for c in &out.checks {
        println!("{}: {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(())
}
