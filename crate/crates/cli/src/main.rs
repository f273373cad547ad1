//! `spingp` command-line entry point.

mod config;
mod failure;
mod simulate;
mod study;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Family, RunConfig};
use failure::Failure;

#[derive(Parser)]
#[command(name = "spingp", version, about = "Spin-chain to Gross-Pitaevskii derivation checks, simulations and convergence studies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symbolic commutators, symbols, matrix oracle, Jordan-Wigner and Bose/Fermi checks.
    VerifyDerivation(Common),
    /// Integrate one lattice or continuum equation family.
    Simulate(Common),
    /// Continuum-limit or truncation convergence study.
    Study(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweep points.
    #[arg(long)]
    threads: Option<usize>,
    /// Validate the configuration and print the resolved plan only.
    #[arg(long)]
    dry_run: bool,
}

fn plan(name: &str, section: &impl serde::Serialize, lines: &[String]) -> Result<(), Failure> {
    println!("plan: {name}");
    for l in lines {
        println!("  {l}");
    }
    let text = toml::to_string(section).map_err(|e| Failure::Config(e.to_string()))?;
    println!("resolved configuration:\n{text}");
    Ok(())
}

fn prepare(common: &Common) -> Result<RunConfig, Failure> {
    if let Some(n) = common.threads {
        if n == 0 {
            return Err(Failure::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(e.to_string()))?;
    }
    RunConfig::load(common.config.as_deref())
}

fn out_dir(path: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(path).map_err(|e| failure::output_err(path, e))
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::VerifyDerivation(c) => {
            let cfg = prepare(&c)?.derivation;
            cfg.validate()?;
            if c.dry_run {
                let lines = [
                    format!("symbolic checks on a ring of {} sites", cfg.sites),
                    format!("matrix oracle: {} samples, {} sites, Bose cutoff {}", cfg.oracle_samples, cfg.oracle_sites, cfg.oracle_cutoff),
                    format!("Jordan-Wigner identities for 2..={} sites", cfg.jordan_wigner_max_sites),
                ];
                return plan("verify-derivation", &cfg, &lines);
            }
            out_dir(&c.out)?;
            verify::run(&cfg, &c.out)
        }
        Command::Simulate(c) => {
            let cfg = prepare(&c)?.simulation;
            cfg.validate()?;
            if c.dry_run {
                let size = if cfg.family.is_lattice() {
                    format!("{} sites", cfg.sites)
                } else {
                    format!("{} points on length {}", cfg.points, cfg.length)
                };
                let scheme = match cfg.family {
                    Family::XxzLattice | Family::HubbardLattice => format!("{:?}", cfg.lattice_scheme),
                    _ => format!("{:?}", cfg.scheme()),
                };
                let lines = [format!("{:?} on {size}, {scheme}, dt = {}, t_end = {}", cfg.family, cfg.dt, cfg.t_end)];
                return plan("simulate", &cfg, &lines);
            }
            out_dir(&c.out)?;
            simulate::run(&cfg, &c.out)
        }
        Command::Study(c) => {
            let cfg = prepare(&c)?.study;
            let points = match cfg.kind {
                config::StudyKind::ContinuumLimit => cfg.continuum_limit.setup()?.sites.len(),
                config::StudyKind::Truncation => cfg.truncation.setup()?.spins.len(),
            };
            if c.dry_run {
                let lines = [format!("{:?}: {points} sweep points, pass band {} ± {}", cfg.kind, cfg.expected(), cfg.band)];
                return plan("study", &cfg, &lines);
            }
            out_dir(&c.out)?;
            study::run(&cfg, &c.out)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
