//! Columns of `P` as localized functions.
//!
//! `P e_s` is the density matrix applied to a delta function at grid site `s`.
//! For the exact free-electron projector it oscillates across the whole
//! domain. The ℓ1 term cuts it off, more sharply for small μ.
//!
//! This uses a 96-point grid on `[0, 40)` so it runs in seconds. See
//! `free_electron_sweep` for the full-size problem.
//!
//! ```bash
//! cargo run --release --example localized_columns
//! ```

use sparse_dm::diagnostics::{delta_projections, exact_density_matrix, sparsity};
use sparse_dm::hamiltonian::{build_laplacian_1d, Grid1D};
use sparse_dm::linalg::DenseSymMatrix;
use sparse_dm::solver::{solve, SolverParams};

/// Half-width (in grid points) of the region holding 99% of the column's
/// squared mass, measured around `site` on the periodic grid.
fn spread(col: &[f64], site: usize) -> usize {
    let n = col.len();
    let total: f64 = col.iter().map(|v| v * v).sum();
    let mut mass = col[site] * col[site];
    for w in 1..n / 2 {
        mass += col[(site + w) % n].powi(2) + col[(site + n - w) % n].powi(2);
        if mass >= 0.99 * total {
            return w;
        }
    }
    n / 2
}

fn report(label: &str, p: &DenseSymMatrix, site: usize) -> Result<(), Box<dyn std::error::Error>> {
    let col = &delta_projections(p, &[site])?[0];
    println!(
        "{label:>10}  spread {:>3} points  sparsity {:.3}  column: {}",
        spread(col, site),
        sparsity(p, 1e-6),
        col[site - 6..=site + 6]
            .iter()
            .step_by(2)
            .map(|v| format!("{v:+.3}"))
            .collect::<Vec<_>>()
            .join(" ")
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let grid = Grid1D::new(40.0, 96)?;
    let h = build_laplacian_1d(&grid);
    let n_occ = 4;
    let site = 48;

    report("exact", &exact_density_matrix(&h, n_occ)?, site)?;
    for mu in [100.0, 20.0, 5.0] {
        let params = SolverParams::new(mu, n_occ as f64)
            .with_penalties(20.0, 20.0)
            .with_max_iter(5000);
        let res = solve(&h, &params, None)?;
        report(&format!("mu = {mu}"), res.p(), site)?;
    }
    Ok(())
}
