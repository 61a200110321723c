//! `revival`: run wave-packet scenarios and write CSV/JSON tables with a manifest.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config error, 3 numeric capacity error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::Failure;
use config::{Format, ScenarioConfig};

const DEFAULT_OUT: &str = "revival-out";

#[derive(Debug, Parser)]
#[command(name = "revival", version, about = "Wave-packet collapse and revival on a circle and in a box")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// TOML scenario file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, env = "REVIVAL_OUT_DIR")]
    out: Option<PathBuf>,

    /// Worker threads; defaults to the machine's core count.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Grid size for the active command.
    #[arg(long, global = true)]
    grid: Option<usize>,

    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Position densities at a list of times.
    Evolve,
    /// Measured against predicted peak structure at fractional revival times.
    RevivalMap,
    /// Residual curves along a semiclassical schedule.
    Sweep,
    /// Husimi function of an evolved coherent state on a phase-space grid.
    Husimi,
    /// Limit density of a box with random half-length.
    Limitdist,
    /// Oracle checks of the closed forms.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::RevivalMap => "revival-map",
            Command::Sweep => "sweep",
            Command::Husimi => "husimi",
            Command::Limitdist => "limitdist",
            Command::Verify => "verify",
        }
    }
}

/// Applies flag overrides; flags win over the file.
fn resolve(cli: &Cli) -> Result<ScenarioConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => ScenarioConfig::load(p)?,
        None => ScenarioConfig::default(),
    };
    if let Some(f) = cli.format {
        cfg.output.format = Some(match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        });
    }
    if let Some(out) = &cli.out {
        cfg.output.dir = Some(out.display().to_string());
    }
    if let Some(n) = cli.grid {
        let missing = || Failure::Config(format!("--grid: no grid setting for `{}`", cli.command.name()));
        match cli.command {
            Command::Evolve => cfg.evolve.as_mut().ok_or_else(missing)?.grid = n,
            Command::RevivalMap => cfg.revival_map.as_mut().ok_or_else(missing)?.grid = n,
            Command::Husimi => cfg.husimi.as_mut().ok_or_else(missing)?.nq = n,
            Command::Limitdist => cfg.limitdist.as_mut().ok_or_else(missing)?.panels = n,
            Command::Sweep | Command::Verify => return Err(missing()),
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let cfg = resolve(cli)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Config("--threads: must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Config(format!("--threads: {e}")))?;
    }
    let mut failed = Vec::new();
    let table = match cli.command {
        Command::Evolve => commands::evolve(&cfg)?,
        Command::RevivalMap => commands::revival_map(&cfg)?,
        Command::Sweep => commands::sweep(&cfg)?,
        Command::Husimi => commands::husimi(&cfg)?,
        Command::Limitdist => commands::limitdist(&cfg)?,
        Command::Verify => {
            let (t, f) = commands::verify(&cfg)?;
            failed = f;
            t
        }
    };
    let dir = PathBuf::from(cfg.output.dir.clone().unwrap_or_else(|| DEFAULT_OUT.to_string()));
    let manifest = output::emit(&dir, cli.command.name(), &cfg.emit(), &table, cfg.output.format.unwrap_or_default())
        .map_err(|e| Failure::Config(format!("output directory {}: {e}", dir.display())))?;
    println!("{}", manifest.display());
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failed))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("revival {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
