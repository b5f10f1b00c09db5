//! Without the ℓ1 term the convex relaxation is exact.
//!
//! For a symmetric `H` with a gap between its N-th and (N+1)-th eigenvalues,
//! `min tr(HP)` over `{P = Pᵀ, tr P = N, 0 ⪯ P ⪯ I}` is attained only at the
//! projector onto the N lowest eigenvectors. The band occupations
//! `θ_i = v_iᵀ P v_i` of the solver output show the 0/1 pattern.
//!
//! ```bash
//! cargo run --example exact_projector
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_dm::diagnostics::{band_occupations, exact_density_matrix};
use sparse_dm::linalg::DenseSymMatrix;
use sparse_dm::solver::{solve, SolverParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let n = 20;
    let n_occ = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let data: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let h = DenseSymMatrix::symmetrized(n, data);

    let params = SolverParams::new(f64::INFINITY, n_occ as f64)
        .with_tol(1e-9)
        .with_max_iter(50_000);
    let res = solve(&h, &params, None)?;
    let exact = exact_density_matrix(&h, n_occ)?;
    println!(
        "converged = {} in {} iterations; ||R - P_N||_F = {:.2e}",
        res.converged,
        res.iterations_used,
        res.r().distance(&exact)?
    );
    println!("tr(HP) = {:.10}  tr(H P_N) = {:.10}", h.trace_product(res.p())?, h.trace_product(&exact)?);

    let theta = band_occupations(res.p(), &h)?;
    print!("theta:");
    for t in &theta {
        print!(" {t:.4}");
    }
    println!();
    Ok(())
}
