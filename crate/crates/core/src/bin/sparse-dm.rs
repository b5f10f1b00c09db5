use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sparse_dm::cli::{execute, exit_code, Command};

/// Sparse density matrices by l1-regularized split Bregman iteration.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one solve and write P, Q, R, history.csv and summary.csv.
    Solve(Paths),
    /// Solve once per value in `solver.mu` and write sweep.csv.
    Sweep(Paths),
    /// Write the exact projector P_exact.mat and spectrum.csv.
    Exact(Paths),
    /// Write occupation, theta, delta, Ritz and saddle-distance CSVs for a solved directory.
    Diagnose(Paths),
}

#[derive(Args)]
struct Paths {
    /// Run configuration (`key = value` lines).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overriding `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    // Usage errors exit 1; 2 is reserved for runs that did not converge.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, paths) = match cli.command {
        Cmd::Solve(p) => (Command::Solve, p),
        Cmd::Sweep(p) => (Command::Sweep, p),
        Cmd::Exact(p) => (Command::Exact, p),
        Cmd::Diagnose(p) => (Command::Diagnose, p),
    };
    let result = execute(command, &paths.config, paths.out.as_deref());
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result) as u8)
}
