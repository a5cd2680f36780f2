//! Command-line front end.
//!
//! Grammar:
//! `beamdecay <certify|table1|simulate|sweep|check> [--config <path>]
//!  [--out <dir>] [--set key=value ...] [--seed N] [--workers N]`
//!
//! The environment variable `BEAMDECAY_OUT` overrides `--out`.

pub mod commands;
pub mod config;
pub mod csvout;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use commands::{EXIT_CONFIG, EXIT_RUNTIME};

#[derive(Debug, Parser)]
#[command(
    name = "beamdecay",
    about = "Decay certificates and verified simulations for boundary-controlled beams"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    /// JSON configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if absent). Defaults to `out`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides applied over the config, `key=value` with dotted keys.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the decay certificate and envelope for a configured beam.
    Certify(CommonArgs),
    /// Reproduce the built-in six-row reference table (self-checking).
    Table1(CommonArgs),
    /// Run a full simulation with energy bookkeeping and verdicts.
    Simulate(CommonArgs),
    /// Certificate (and optionally measured-rate) grid over damping values.
    Sweep(CommonArgs),
    /// Run the randomized verification suites.
    Check(CommonArgs),
}

/// A parsed invocation.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub overrides: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
}

fn manifest_from(common: &CommonArgs) -> Result<RunManifest> {
    let out_dir = std::env::var_os("BEAMDECAY_OUT")
        .map(PathBuf::from)
        .or_else(|| common.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut overrides = Vec::new();
    for item in &common.set {
        let (k, v) = item.split_once('=').ok_or_else(|| {
            Error::Config(format!("--set expects key=value, got {item:?}"))
        })?;
        overrides.push((k.to_string(), v.to_string()));
    }
    Ok(RunManifest {
        config_path: common.config.clone(),
        out_dir,
        overrides,
        seed: common.seed,
        workers: common.workers,
    })
}

fn prepare(common: &CommonArgs, config_required: bool) -> Result<(RunManifest, config::FileConfig)> {
    let manifest = manifest_from(common)?;
    if config_required && manifest.config_path.is_none() {
        return Err(Error::Config("this command needs --config <path>".into()));
    }
    let cfg = config::load_config(manifest.config_path.as_deref(), &manifest.overrides)?;
    std::fs::create_dir_all(&manifest.out_dir)?;
    Ok((manifest, cfg))
}

/// Runs the CLI with explicit arguments; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap handles --help/--version with success exit codes
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { 0 };
        }
    };
    let (common, config_required) = match &cli.command {
        Command::Certify(c) | Command::Simulate(c) | Command::Sweep(c) => (c, true),
        Command::Table1(c) | Command::Check(c) => (c, false),
    };
    let (manifest, cfg) = match prepare(common, config_required) {
        Ok(v) => v,
        Err(e) => {
            eprintln!("{e}");
            return match e {
                Error::Config(_) => EXIT_CONFIG,
                _ => EXIT_RUNTIME,
            };
        }
    };
    match cli.command {
        Command::Certify(_) => commands::cmd_certify(&cfg, &manifest.out_dir),
        Command::Table1(_) => commands::cmd_table1(&cfg, &manifest.out_dir),
        Command::Simulate(_) => commands::cmd_simulate(&cfg, &manifest.out_dir),
        Command::Sweep(_) => commands::cmd_sweep(&cfg, &manifest.out_dir, manifest.workers),
        Command::Check(_) => commands::cmd_check(&cfg, &manifest.out_dir, manifest.seed),
    }
}

/// Entry point for the binary: parses `std::env::args`.
pub fn main() -> i32 {
    run(std::env::args())
}
