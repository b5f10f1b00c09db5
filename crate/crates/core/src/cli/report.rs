use std::fs;
use std::path::Path;

use super::CliError;
use crate::linalg::io::{self, fmt_sci};
use crate::linalg::DenseSymMatrix;
use crate::solver::{feasibility, objective, SolverResult};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub fn write_csv(path: &Path, header: &str, rows: &[Vec<String>]) -> Result<(), CliError> {
    let mut text = String::with_capacity(32 * (rows.len() + 1));
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(&row.join(","));
        text.push('\n');
    }
    fs::write(path, text).map_err(io_err(path))
}

pub fn write_mat(path: &Path, m: &DenseSymMatrix) -> Result<(), CliError> {
    io::write_matrix(path, m)?;
    Ok(())
}

/// `index,<column>` rows with 1-based indices.
pub fn indexed_rows(values: &[f64]) -> Vec<Vec<String>> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| vec![(i + 1).to_string(), fmt_sci(*v)])
        .collect()
}

/// Writes P, Q, R, b, d, `history.csv` and `summary.csv` for one solve.
pub fn write_solution(
    dir: &Path,
    res: &SolverResult,
    h: &DenseSymMatrix,
    mu: f64,
    n_electrons: f64,
) -> Result<(), CliError> {
    ensure_dir(dir)?;
    let s = &res.state;
    for (name, m) in [("P", &s.p), ("Q", &s.q), ("R", &s.r), ("b", &s.b), ("d", &s.d)] {
        write_mat(&dir.join(format!("{name}.mat")), m)?;
    }

    let monitored = res.history.iter().any(|r| r.saddle_distance.is_some());
    let mut header = String::from("iter,objective,residual_Q,residual_R,delta_P");
    if monitored {
        header.push_str(",saddle_distance");
    }
    let rows: Vec<Vec<String>> = res
        .history
        .iter()
        .map(|r| {
            let mut row = vec![
                r.iteration.to_string(),
                fmt_sci(r.objective),
                fmt_sci(r.residual_q),
                fmt_sci(r.residual_r),
                fmt_sci(r.delta_p),
            ];
            if monitored {
                row.push(r.saddle_distance.map(fmt_sci).unwrap_or_default());
            }
            row
        })
        .collect();
    write_csv(&dir.join("history.csv"), &header, &rows)?;

    let last = res.last_record();
    let feas = feasibility(&s.p, n_electrons)?;
    write_csv(
        &dir.join("summary.csv"),
        "mu,n_electrons,iterations,converged,objective,residual_Q,residual_R,delta_P,asym,trace_err,eig_lo,eig_hi",
        &[vec![
            fmt_sci(mu),
            fmt_sci(n_electrons),
            res.iterations_used.to_string(),
            res.converged.to_string(),
            fmt_sci(objective(&s.p, h, mu)?),
            fmt_sci(last.residual_q),
            fmt_sci(last.residual_r),
            fmt_sci(last.delta_p),
            fmt_sci(feas.asym),
            fmt_sci(feas.trace_err),
            fmt_sci(feas.eig_lo),
            fmt_sci(feas.eig_hi),
        ]],
    )
}
