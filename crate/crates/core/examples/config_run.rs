//! Driving a run from a config file without the binary.
//!
//! Writes a small free-electron config into a temporary directory, runs
//! `exact`, `sweep` and `diagnose` through the library, and prints the
//! resulting `sweep.csv`. The `sparse-dm` binary does the same from the shell:
//!
//! ```bash
//! sparse-dm sweep --config run.cfg --out out
//! ```
//!
//! ```bash
//! cargo run --release --example config_run
//! ```

use sparse_dm::cli::{cmd_diagnose, cmd_exact, cmd_sweep, Outcome, RunConfig};

const CONFIG: &str = "\
# free electrons, small grid
hamiltonian.kind = free
grid.length = 30
grid.n = 64
solver.mu = 5, 50, inf
solver.n_electrons = 4
solver.lambda = 20
solver.r = 20
solver.max_iter = 5000
diagnostics.sites = 0, 32
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("sparse-dm-config-run-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("run.cfg"), CONFIG)?;
    let mut cfg = RunConfig::load(dir.join("run.cfg"))?;

    cfg.output_dir = dir.join("exact");
    cmd_exact(&cfg)?;
    cmd_diagnose(&cfg)?;

    cfg.output_dir = dir.join("sweep");
    if cmd_sweep(&cfg)? == Outcome::NotConverged {
        println!("some runs hit max_iter");
    }
    println!("{}", std::fs::read_to_string(dir.join("sweep/sweep.csv"))?);

    let occ = std::fs::read_to_string(dir.join("exact/occupations.csv"))?;
    println!("exact occupations (first 6):");
    for line in occ.lines().take(7) {
        println!("  {line}");
    }
    println!("outputs left in {}", dir.display());
    Ok(())
}
