#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod output;
mod spec;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use commands::*;
use output::{OutputDir, RunManifest, TableFormat};

/// Thresholded multiple interval estimation under a normal hyperprior.
#[derive(Parser, Debug)]
#[command(name = "bmie", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// BREL, BFWCR and BTR over a threshold grid at Sidak levels
    Curves(CurvesArgs),
    /// Optimize individual levels over a threshold grid and report C*
    Optimize(OptimizeArgs),
    /// Thresholded intervals for in-season batting averages
    Batting(BattingArgs),
    /// Thresholded two-sample t intervals for expression data
    Genes(GenesArgs),
    /// Monte-Carlo study under prior misspecification
    Simulate(SimulateArgs),
    /// Repeat a run from its manifest
    Rerun {
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    use bmie_core::Error as E;
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::Domain(_) => 2,
                E::Parse { .. } | E::Io(_) | E::Csv(_) => 3,
                E::NonFinite { .. } | E::Infeasible { .. } | E::NoConvergence { .. } | E::NotBracketed { .. } => 4,
            };
        }
        if cause.is::<std::io::Error>() || cause.is::<csv::Error>() {
            return 3;
        }
    }
    1
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("BMIE_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| UsageError(format!("BMIE_THREADS must be a count, got '{v}'")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global()?;
    }
    Ok(())
}

fn execute<C: serde::Serialize>(
    name: &str,
    cfg: &C,
    seed: Option<u64>,
    common: &CommonArgs,
    run: impl FnOnce(&C, &OutputDir) -> Result<()>,
) -> Result<()> {
    let format = common.format.unwrap_or_default();
    let out = OutputDir::create(&common.out_dir(), format)?;
    run(cfg, &out)?;
    out.manifest(&RunManifest::new(name, cfg, seed, format)?)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Curves(a) => execute("curves", &a.resolve()?, None, &a.common, run_curves),
        Command::Optimize(a) => execute("optimize", &a.resolve()?, None, &a.common, run_optimize),
        Command::Batting(a) => execute("batting", &a.resolve()?, None, &a.common, run_batting),
        Command::Genes(a) => execute("genes", &a.resolve()?, None, &a.common, run_genes),
        Command::Simulate(a) => {
            let cfg = a.resolve()?;
            let seed = Some(cfg.seed);
            execute("simulate", &cfg, seed, &a.common, run_simulate)
        }
        Command::Rerun { manifest, out } => {
            let m = RunManifest::load(&manifest)?;
            let dir = out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
            let out_dir = OutputDir::create(&dir, m.format)?;
            rerun(&m, &out_dir)?;
            let again = RunManifest { timestamp: RunManifest::new("", &(), None, TableFormat::Csv)?.timestamp, ..m };
            out_dir.manifest(&again)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
