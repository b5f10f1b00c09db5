//! Ten attractive wells on a periodic line: bands and occupation numbers.
//!
//! The modified Kronig–Penney potential (depth 1, width 3, ten wells evenly
//! spaced on `[0, 100)`) splits the low spectrum into two bands of ten states.
//! With N = 10 or 20 a band is filled exactly and the occupation numbers `f_i`
//! of `P` are 0 or 1. With N = 15 the second band is half filled and ten
//! occupations sit near 0.5.
//!
//! ```bash
//! cargo run --release --example kronig_penney [-- 15]
//! ```

use std::time::Instant;

use sparse_dm::diagnostics::{
    exact_density_from, filtered_density_matrix, occupation_numbers, ritz_compare,
};
use sparse_dm::hamiltonian::{build_kronig_penney, Grid1D, KronigPenneyParams};
use sparse_dm::linalg::sym_eig;
use sparse_dm::solver::{solve, SolverParams};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let counts: Vec<usize> = match std::env::args().nth(1) {
        Some(n) => vec![n.parse()?],
        None => vec![10, 15, 20],
    };
    let grid = Grid1D::new(100.0, 256)?;
    let kp = KronigPenneyParams::defaults(grid.length());
    let h = build_kronig_penney(&grid, &kp)?;
    let eig = sym_eig(&h)?;
    let ev = eig.eigenvalues();
    println!("lowest 22 eigenvalues:");
    for chunk in ev[..22].chunks(11) {
        println!("  {}", chunk.iter().map(|e| format!("{e:+.4}")).collect::<Vec<_>>().join(" "));
    }

    for n_occ in counts {
        let params = SolverParams::new(100.0, n_occ as f64)
            .with_penalties(50.0, 50.0)
            .with_record_every(500);
        let t = Instant::now();
        let res = solve(&h, &params, None)?;
        let occ = occupation_numbers(res.p())?;
        println!(
            "\nN = {n_occ}: {} after {} iterations ({:.1} s), sum f = {:.8}",
            if res.converged { "converged" } else { "stopped" },
            res.iterations_used,
            t.elapsed().as_secs_f64(),
            occ.total()
        );
        println!(
            "  f_1..f_25: {}",
            occ.values[..25].iter().map(|f| format!("{f:.3}")).collect::<Vec<_>>().join(" ")
        );

        // The fully occupied part compared with the exact first-band projector.
        let m1 = filtered_density_matrix(&occ, 1, 10)?;
        let p10 = exact_density_from(&eig, 10)?;
        println!(
            "  ||M_1 - P_10|| / ||P_10|| = {:.4}",
            m1.distance(&p10)? / p10.frobenius_norm()
        );
        let ritz = ritz_compare(res.p(), &h, 10)?;
        let worst = ritz
            .eigs_ph
            .iter()
            .zip(&ritz.eigs_h)
            .map(|(a, b)| ((a - b) / b).abs())
            .fold(0.0, f64::max);
        println!("  first 10 eigenvalues of PH vs H: worst relative difference {worst:.2e}");
    }
    Ok(())
}
