//! Experiment runner for random polynomial zero simulations: one
//! subcommand per experiment kind, JSON configs with strict keys, and
//! fully reproducible outputs (a config plus a seed determines every
//! CSV byte, whatever the worker-thread count).

mod config;
mod error;
mod manifest;
mod runner;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::{config_error, Result};
use crate::runner::{FigurePreset, Plan};

#[derive(Parser)]
#[command(
    name = "rpzeros",
    version,
    about = "Monte Carlo experiments on zeros of random polynomials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthonormal-basis diagnostics: whitening and re-quadrature residuals.
    Onb(ConfigArgs),
    /// Zero dumps and histogram rasters, from a config or a bundled preset.
    Zeros(ZerosArgs),
    /// Empirical zero measures against equilibrium references.
    Equilibrium(ConfigArgs),
    /// Real-zero counts against classical expectations.
    Realzeros(ConfigArgs),
    /// Logarithmic moment estimates against their proven bounds.
    Moments(ConfigArgs),
    /// Linear-statistic fluctuation experiments.
    Clt(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (the RZ_THREADS environment variable wins).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the configured output directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ZerosArgs {
    /// JSON experiment configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Bundled gallery schedule instead of a config.
    #[arg(long, value_enum)]
    preset: Option<FigurePreset>,
    /// Leading preset columns to run (figure-3 only, 1 to 12).
    #[arg(long)]
    columns: Option<usize>,
    /// Override the preset or configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (the RZ_THREADS environment variable wins).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory (required with a preset).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    let (plan, threads) = match cli.command {
        Command::Onb(args) => plan_from_config(ExperimentKind::Onb, args)?,
        Command::Zeros(args) => plan_zeros(args)?,
        Command::Equilibrium(args) => {
            plan_from_config(ExperimentKind::Equilibrium, args)?
        }
        Command::Realzeros(args) => {
            plan_from_config(ExperimentKind::Realzeros, args)?
        }
        Command::Moments(args) => plan_from_config(ExperimentKind::Moments, args)?,
        Command::Clt(args) => plan_from_config(ExperimentKind::Clt, args)?,
    };
    let manifest = match resolve_threads(threads)? {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|err| {
                    config_error(format!(
                        "cannot build a {threads}-thread worker pool: {err}"
                    ))
                })?;
            pool.install(|| runner::run(&plan))?
        }
        None => runner::run(&plan)?,
    };
    println!(
        "wrote {} outputs to {}",
        manifest.outputs.len(),
        plan.out.join("manifest.json").display()
    );
    Ok(())
}

fn plan_from_config(
    kind: ExperimentKind,
    args: ConfigArgs,
) -> Result<(Plan, Option<usize>)> {
    let config = load_config(&args.config, kind)?;
    let plan = Plan::from_config(&config, args.seed, args.out)?;
    Ok((plan, args.threads))
}

fn plan_zeros(args: ZerosArgs) -> Result<(Plan, Option<usize>)> {
    let plan = match (args.config, args.preset) {
        (Some(path), None) => {
            if args.columns.is_some() {
                return Err(config_error(
                    "--columns only applies to the figure-3 preset",
                ));
            }
            let config = load_config(&path, ExperimentKind::Zeros)?;
            Plan::from_config(&config, args.seed, args.out)?
        }
        (None, Some(preset)) => {
            Plan::from_preset(preset, args.columns, args.seed, args.out)?
        }
        (None, None) => {
            return Err(config_error("zeros needs either --config or --preset"))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    Ok((plan, args.threads))
}

fn load_config(path: &PathBuf, expected: ExperimentKind) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|err| {
        config_error(format!("cannot read config {}: {err}", path.display()))
    })?;
    let config = ExperimentConfig::from_json(&text)?;
    if config.experiment != expected {
        return Err(config_error(format!(
            "config declares the {} experiment but the {expected} subcommand \
             was invoked",
            config.experiment
        )));
    }
    Ok(config)
}

/// Worker-thread resolution: `RZ_THREADS` overrides `--threads`, and
/// `None` leaves the library's default pool in place.
fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>> {
    if let Ok(raw) = std::env::var("RZ_THREADS") {
        let threads: usize = raw.trim().parse().map_err(|_| {
            config_error(format!(
                "RZ_THREADS must be a positive integer, got {raw:?}"
            ))
        })?;
        if threads == 0 {
            return Err(config_error("RZ_THREADS must be at least 1"));
        }
        return Ok(Some(threads));
    }
    if flag == Some(0) {
        return Err(config_error("--threads must be at least 1"));
    }
    Ok(flag)
}
