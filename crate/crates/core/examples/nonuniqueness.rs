//! The relaxed problem can have many minimizers.
//!
//! For `H = [[1,0,0],[0,2,2],[0,2,2]]`, N = 1 and μ = 1 both
//!
//! ```text
//! P0 = [[0, 0, 0], [0, .5, -.5], [0, -.5, .5]]      P1 = diag(1, 0, 0)
//! ```
//!
//! score `tr(HP) + ||P||_1 = 2`, as does every convex combination. Different
//! starting points lead the iteration to different members of that set.
//!
//! ```bash
//! cargo run --example nonuniqueness
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_dm::linalg::DenseSymMatrix;
use sparse_dm::solver::{feasibility, objective, solve, SolverParams};

fn random_start(rng: &mut impl Rng) -> DenseSymMatrix {
    // diag(f) rotated by a random plane rotation, f on the simplex
    let a: f64 = rng.gen_range(0.0..1.0);
    let b: f64 = rng.gen_range(0.0..1.0 - a);
    let f = [a, b, 1.0 - a - b];
    let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (c, s) = (t.cos(), t.sin());
    let rot = [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]];
    let mut data = vec![0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            data[i * 3 + j] = (0..3).map(|k| rot[i][k] * f[k] * rot[j][k]).sum();
        }
    }
    DenseSymMatrix::symmetrized(3, data)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = DenseSymMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 2.0, 2.0],
        vec![0.0, 2.0, 2.0],
    ])?;
    let p0 = DenseSymMatrix::from_rows(&[
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.5, -0.5],
        vec![0.0, -0.5, 0.5],
    ])?;
    let p1 = DenseSymMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
    println!("objective(P0) = {}", objective(&p0, &h, 1.0)?);
    println!("objective(P1) = {}", objective(&p1, &h, 1.0)?);

    let params = SolverParams::new(1.0, 1.0).with_tol(1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    println!("\n{:>5} {:>14} {:>9} {:>9} {:>9}", "start", "objective", "P[0][0]", "P[1][1]", "P[1][2]");
    for k in 0..8 {
        let start = if k == 0 { None } else { Some(random_start(&mut rng)) };
        let res = solve(&h, &params, start.as_ref())?;
        let p = res.p();
        assert!(feasibility(p, 1.0)?.max() < 1e-6);
        println!(
            "{:>5} {:>14.10} {:>9.5} {:>9.5} {:>9.5}",
            if k == 0 { "I/3".to_string() } else { format!("#{k}") },
            objective(p, &h, 1.0)?,
            p[(0, 0)],
            p[(1, 1)],
            p[(1, 2)]
        );
    }
    println!("\nEvery run reaches the optimal value 2 at a different point of the segment [P0, P1].");
    Ok(())
}
