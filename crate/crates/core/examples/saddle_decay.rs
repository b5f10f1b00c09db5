//! A fixed point of the iteration and the distance to it along a run.
//!
//! On the 3×3 instance of the `nonuniqueness` example (λ = r = μ = 1) the
//! state
//!
//! ```text
//! P* = Q* = R* = diag(1, 0, 0)
//! b* = [[1, 0, 0], [0, 1, -1], [0, -1, 1]]
//! d* = [[0, 0, 0], [0, -1, -1], [0, -1, -1]]
//! ```
//!
//! is reproduced by one step. Started elsewhere, the weighted distance
//! `λ||b−b*||² + r||d−d*||² + λ||Q−Q*||² + r||R−R*||²` never increases but
//! usually settles above zero, because the run converges to another saddle
//! point.
//!
//! ```bash
//! cargo run --example saddle_decay [-- decay.csv]
//! ```

use sparse_dm::diagnostics::saddle_distance;
use sparse_dm::linalg::{io::fmt_sci, DenseSymMatrix};
use sparse_dm::solver::{solve_monitored, step, SolverParams, SolverState};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let h = DenseSymMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 2.0, 2.0],
        vec![0.0, 2.0, 2.0],
    ])?;
    let p = DenseSymMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
    let star = SolverState {
        q: p.clone(),
        r: p.clone(),
        b: DenseSymMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, -1.0, 1.0],
        ])?,
        d: DenseSymMatrix::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, -1.0, -1.0],
            vec![0.0, -1.0, -1.0],
        ])?,
        p,
        iteration: 0,
    };
    let params = SolverParams::new(1.0, 1.0).with_tol(1e-10);

    let next = step(&star, &h, &params)?;
    println!(
        "one step from the fixed point moves it by {:e}",
        saddle_distance(&next, &star, 1.0, 1.0)
    );

    let start = DenseSymMatrix::from_rows(&[
        vec![0.2, 0.1, 0.0],
        vec![0.1, 0.5, 0.1],
        vec![0.0, 0.1, 0.3],
    ])?;
    let res = solve_monitored(&h, &params, Some(&start), Some(&star))?;
    let dist: Vec<(usize, f64)> = res
        .history
        .iter()
        .map(|r| (r.iteration, r.saddle_distance.unwrap()))
        .collect();
    for &(k, d) in dist.iter().filter(|(k, _)| k % 10 == 0 || *k < 5) {
        println!("iter {k:>4}  distance {d:.10}");
    }
    let worst = dist.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::MIN, f64::max);
    println!(
        "converged = {} after {} iterations; largest single-step increase {:e}",
        res.converged, res.iterations_used, worst
    );

    if let Some(path) = std::env::args().nth(1) {
        let csv: String = std::iter::once("iter,saddle_distance\n".to_string())
            .chain(dist.iter().map(|(k, d)| format!("{k},{}\n", fmt_sci(*d))))
            .collect();
        std::fs::write(&path, csv)?;
        println!("wrote {path}");
    }
    Ok(())
}
