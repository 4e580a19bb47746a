use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mbi_cli::{run, Command, Overrides, RunConfig};

#[derive(Parser)]
#[command(name = "mbi", version = mbi_core::VERSION, about = "Born-Infeld hydrogen and Bohmian numerics")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Key-value config file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Fine-structure constant.
    #[arg(long, global = true)]
    alpha: Option<f64>,
    /// Born-Infeld length (Compton units).
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Relative tolerance used by the subcommand.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Grid size (meaning depends on the subcommand).
    #[arg(long, global = true)]
    grid: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Extra setting as key=value (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Tables of A0, the smoothed potential, U, series and asymptotics.
    Potential,
    /// Coulomb and Coulomb-Born-Infeld levels, Klein-Gordon self-consistent levels.
    Spectrum,
    /// First-order ground-state shift against beta.
    Perturb,
    /// Upper bounds on beta for a set of allowed fractions.
    BetaBound,
    /// Lattice evolution with divergence diagnostics and a snapshot.
    Fields,
    /// Guiding-equation trajectories in a superposition state.
    Trajectory,
    /// Run the acceptance checks.
    Verify,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Self {
        match s {
            Sub::Potential => Command::Potential,
            Sub::Spectrum => Command::Spectrum,
            Sub::Perturb => Command::Perturb,
            Sub::BetaBound => Command::BetaBound,
            Sub::Fields => Command::Fields,
            Sub::Trajectory => Command::Trajectory,
            Sub::Verify => Command::Verify,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let c = cli.common;
    let flags = Overrides {
        alpha: c.alpha,
        beta: c.beta,
        tol: c.tol,
        grid: c.grid,
        out: c.out,
        format: c.format,
        set: c.set,
    };
    let outcome = RunConfig::resolve(cli.command.into(), c.config.as_deref(), flags)
        .map_err(mbi_cli::CliError::from)
        .and_then(|cfg| run(&cfg).map(|files| (cfg, files)));
    match outcome {
        Ok((cfg, files)) => {
            println!("config_hash {}", cfg.hash());
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
