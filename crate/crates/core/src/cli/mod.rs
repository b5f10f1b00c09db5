//! Batch experiment runs driven by a config file.
//!
//! Each command reads a [`RunConfig`], writes plain-text artifacts into the
//! output directory and returns an [`Outcome`]. The binary maps outcomes and
//! errors to exit codes with [`exit_code`].

mod commands;
mod config;
mod report;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use commands::{cmd_diagnose, cmd_exact, cmd_solve, cmd_sweep, THREADS_ENV};
pub use config::{ReferencePaths, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config field `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("missing solution file {0} (run `solve` into this directory first)")]
    MissingSolution(PathBuf),
    #[error(transparent)]
    Solver(#[from] crate::solver::SolverError),
    #[error(transparent)]
    Diagnostics(#[from] crate::diagnostics::DiagnosticsError),
    #[error(transparent)]
    Linalg(#[from] crate::linalg::LinalgError),
}

impl CliError {
    pub(crate) fn field(field: &str, msg: impl Into<String>) -> Self {
        Self::Config {
            field: field.to_string(),
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Exact,
    Diagnose,
}

/// Result of a command that ran to completion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Completed,
    /// At least one solve hit `max_iter` (or, in a sweep, failed).
    NotConverged,
}

/// `0` on success, `2` when a solve did not converge, `1` on any error.
pub fn exit_code(result: &Result<Outcome, CliError>) -> i32 {
    match result {
        Ok(Outcome::Completed) => 0,
        Ok(Outcome::NotConverged) => 2,
        Err(_) => 1,
    }
}

/// Loads the config, applies the `--out` override and dispatches.
pub fn execute(
    command: Command,
    config_path: &Path,
    out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let mut cfg = RunConfig::load(config_path)?;
    if let Some(dir) = out {
        cfg.output_dir = dir.to_path_buf();
    }
    match command {
        Command::Solve => cmd_solve(&cfg),
        Command::Sweep => cmd_sweep(&cfg),
        Command::Exact => cmd_exact(&cfg),
        Command::Diagnose => cmd_diagnose(&cfg),
    }
}
