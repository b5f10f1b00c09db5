use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::thread;

use super::report::{ensure_dir, indexed_rows, write_csv, write_mat, write_solution};
use super::{CliError, Outcome, RunConfig};
use crate::diagnostics::{
    band_occupations, delta_projections, exact_density_from, occupation_numbers, ritz_compare,
    space_approximation_from, sparsity,
};
use crate::hamiltonian::{load_matrix, HamiltonianError, HamiltonianModel};
use crate::linalg::io::fmt_sci;
use crate::linalg::{sym_eig, DenseSymMatrix, SpectralDecomposition};
use crate::solver::{solve_monitored, SolverResult, SolverState};

/// Environment variable capping the number of concurrent sweep runs.
pub const THREADS_ENV: &str = "SPARSE_DM_THREADS";

/// Entries below this fraction of `max|P_ij|` count as zero in `sweep.csv`.
const SPARSITY_REL: f64 = 1e-6;

fn matrix_field(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::field(field, e.to_string())
}

fn build_h(cfg: &RunConfig) -> Result<DenseSymMatrix, CliError> {
    let field = match cfg.hamiltonian {
        HamiltonianModel::FromFile(_) => "hamiltonian.path",
        HamiltonianModel::ModifiedKronigPenney(_) => "kp",
        HamiltonianModel::FreeLaplacian => "grid",
    };
    cfg.hamiltonian.build(&cfg.grid).map_err(|e| match e {
        HamiltonianError::Load(inner) => matrix_field(field, inner),
        other => matrix_field(field, other),
    })
}

fn load_initial(cfg: &RunConfig) -> Result<Option<DenseSymMatrix>, CliError> {
    cfg.initial
        .as_ref()
        .map(|p| load_matrix(p).map_err(|e| matrix_field("solver.initial", e)))
        .transpose()
}

fn load_reference(cfg: &RunConfig) -> Result<Option<SolverState>, CliError> {
    let Some(r) = &cfg.reference else {
        return Ok(None);
    };
    let get = |field: &str, path: &PathBuf| load_matrix(path).map_err(|e| matrix_field(field, e));
    Ok(Some(SolverState {
        p: get("reference.P", &r.p)?,
        q: get("reference.Q", &r.q)?,
        r: get("reference.R", &r.r)?,
        b: get("reference.b", &r.b)?,
        d: get("reference.d", &r.d)?,
        iteration: 0,
    }))
}

fn single_mu(cfg: &RunConfig) -> Result<f64, CliError> {
    match cfg.mu.as_slice() {
        [mu] => Ok(*mu),
        many => Err(CliError::field(
            "solver.mu",
            format!("{} values given; use `sweep` for a list", many.len()),
        )),
    }
}

fn run_one(
    cfg: &RunConfig,
    h: &DenseSymMatrix,
    mu: f64,
    initial: Option<&DenseSymMatrix>,
    reference: Option<&SolverState>,
) -> Result<SolverResult, CliError> {
    let params = cfg.solver_params(mu);
    params.validate(h.dim())?;
    log::info!("solving n = {}, N = {}, mu = {mu}", h.dim(), cfg.n_electrons);
    let res = solve_monitored(h, &params, initial, reference)?;
    log::info!(
        "mu = {mu}: {} after {} iterations",
        if res.converged { "converged" } else { "not converged" },
        res.iterations_used
    );
    Ok(res)
}

/// Runs one solve and writes its artifacts into the output directory.
pub fn cmd_solve(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let mu = single_mu(cfg)?;
    let h = build_h(cfg)?;
    let initial = load_initial(cfg)?;
    let reference = load_reference(cfg)?;
    let res = run_one(cfg, &h, mu, initial.as_ref(), reference.as_ref())?;
    write_solution(&cfg.output_dir, &res, &h, mu, cfg.n_electrons)?;
    Ok(if res.converged {
        Outcome::Completed
    } else {
        Outcome::NotConverged
    })
}

fn sweep_threads(runs: usize) -> usize {
    let hw = thread::available_parallelism().map_or(1, |n| n.get());
    let requested = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0);
    requested.unwrap_or(hw).min(runs).max(1)
}

/// Subdirectory name for one sweep member, e.g. `mu_10` or `mu_inf`.
pub fn sweep_dir_name(mu: f64) -> String {
    format!("mu_{mu}")
}

struct SweepRow {
    mu: f64,
    tr_hp: f64,
    l1: f64,
    space_approx: f64,
    sparsity: f64,
}

/// Solves once per `solver.mu` value, concurrently, then writes `sweep.csv`.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let h = build_h(cfg)?;
    let n_occ = cfg.occupied_states()?;
    for &mu in &cfg.mu {
        cfg.solver_params(mu).validate(h.dim())?;
    }
    let initial = load_initial(cfg)?;
    let reference = load_reference(cfg)?;
    let eig = sym_eig(&h)?;
    let exact_energy: f64 = eig.eigenvalues()[..n_occ].iter().sum();
    ensure_dir(&cfg.output_dir)?;

    let threads = sweep_threads(cfg.mu.len());
    log::info!("sweeping {} values of mu on {threads} threads", cfg.mu.len());
    let next = AtomicUsize::new(0);
    let worker = || {
        let mut done = Vec::new();
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(&mu) = cfg.mu.get(i) else { break };
            let out = sweep_member(cfg, &h, &eig, n_occ, mu, initial.as_ref(), reference.as_ref());
            done.push((i, out));
        }
        done
    };
    let mut results: Vec<(usize, Result<(SweepRow, bool), CliError>)> = thread::scope(|s| {
        let handles: Vec<_> = (0..threads).map(|_| s.spawn(worker)).collect();
        handles
            .into_iter()
            .flat_map(|handle| handle.join().expect("sweep worker panicked"))
            .collect()
    });
    results.sort_by_key(|(i, _)| *i);

    let mut all_ok = true;
    let mut rows = Vec::new();
    for (i, res) in results {
        match res {
            Ok((row, converged)) => {
                all_ok &= converged;
                rows.push(vec![
                    fmt_sci(row.mu),
                    fmt_sci(row.tr_hp),
                    fmt_sci(exact_energy),
                    fmt_sci(row.l1),
                    fmt_sci(row.space_approx),
                    fmt_sci(row.sparsity),
                ]);
            }
            Err(e) => {
                all_ok = false;
                log::error!("run mu = {} failed: {e}", cfg.mu[i]);
            }
        }
    }
    write_csv(
        &cfg.output_dir.join("sweep.csv"),
        "mu,trHP,exact_energy,l1,space_approx,sparsity",
        &rows,
    )?;
    Ok(if all_ok {
        Outcome::Completed
    } else {
        Outcome::NotConverged
    })
}

fn sweep_member(
    cfg: &RunConfig,
    h: &DenseSymMatrix,
    eig: &SpectralDecomposition,
    n_occ: usize,
    mu: f64,
    initial: Option<&DenseSymMatrix>,
    reference: Option<&SolverState>,
) -> Result<(SweepRow, bool), CliError> {
    let res = run_one(cfg, h, mu, initial, reference)?;
    let dir = cfg.output_dir.join(sweep_dir_name(mu));
    write_solution(&dir, &res, h, mu, cfg.n_electrons)?;
    let p = res.p();
    let row = SweepRow {
        mu,
        tr_hp: h.trace_product(p)?,
        l1: p.l1_norm(),
        space_approx: space_approximation_from(p, eig, n_occ)?,
        sparsity: sparsity(p, SPARSITY_REL),
    };
    Ok((row, res.converged))
}

/// Writes the projector onto the `N` lowest eigenvectors and the spectrum of `H`.
pub fn cmd_exact(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let h = build_h(cfg)?;
    let n_occ = cfg.occupied_states()?;
    if n_occ > h.dim() {
        return Err(CliError::field(
            "solver.n_electrons",
            format!("{n_occ} exceeds the dimension {}", h.dim()),
        ));
    }
    let eig = sym_eig(&h)?;
    let p = exact_density_from(&eig, n_occ)?;
    ensure_dir(&cfg.output_dir)?;
    write_mat(&cfg.output_dir.join("P_exact.mat"), &p)?;
    write_csv(
        &cfg.output_dir.join("spectrum.csv"),
        "index,eigenvalue",
        &indexed_rows(eig.eigenvalues()),
    )?;
    Ok(Outcome::Completed)
}

/// Reads `P.mat` (or `P_exact.mat`) from the output directory and writes the
/// diagnostic CSVs next to it.
pub fn cmd_diagnose(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let dir = &cfg.output_dir;
    let p_path = solution_path(dir)?;
    let p = load_matrix(&p_path).map_err(|e| matrix_field(&p_path.display().to_string(), e))?;
    let h = build_h(cfg)?;
    if p.dim() != h.dim() {
        return Err(CliError::field(
            &p_path.display().to_string(),
            format!("dimension {} does not match the Hamiltonian ({})", p.dim(), h.dim()),
        ));
    }
    let n = h.dim();

    let occ = occupation_numbers(&p)?;
    write_csv(&dir.join("occupations.csv"), "index,f", &indexed_rows(&occ.values))?;
    let theta = band_occupations(&p, &h)?;
    write_csv(&dir.join("theta.csv"), "index,theta", &indexed_rows(&theta))?;

    let sites = cfg.sites.clone().unwrap_or_else(|| vec![n / 2]);
    let columns = delta_projections(&p, &sites)
        .map_err(|e| CliError::field("diagnostics.sites", e.to_string()))?;
    let use_index = matches!(cfg.hamiltonian, HamiltonianModel::FromFile(_)) && cfg.grid.points() != n;
    for (site, col) in sites.iter().zip(&columns) {
        let rows: Vec<Vec<String>> = col
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = if use_index { i as f64 } else { cfg.grid.x(i) };
                vec![fmt_sci(x), fmt_sci(*v)]
            })
            .collect();
        write_csv(&dir.join(format!("delta_{site}.csv")), "x,value", &rows)?;
    }

    let k = cfg
        .ritz_k
        .unwrap_or_else(|| (cfg.n_electrons.ceil() as usize).clamp(1, n));
    let ritz = ritz_compare(&p, &h, k)
        .map_err(|e| CliError::field("diagnostics.ritz_k", e.to_string()))?;
    let rows: Vec<Vec<String>> = ritz
        .eigs_ph
        .iter()
        .zip(&ritz.eigs_h)
        .enumerate()
        .map(|(i, (a, b))| vec![(i + 1).to_string(), fmt_sci(*a), fmt_sci(*b)])
        .collect();
    write_csv(&dir.join("ritz.csv"), "index,eig_PH,eig_H", &rows)?;

    if let Some(reference) = load_reference(cfg)? {
        // Replays the configured solve; the distance needs every iterate.
        let mu = cfg.mu[0];
        let initial = load_initial(cfg)?;
        let res = run_one(cfg, &h, mu, initial.as_ref(), Some(&reference))?;
        let rows: Vec<Vec<String>> = res
            .history
            .iter()
            .map(|r| vec![r.iteration.to_string(), r.saddle_distance.map(fmt_sci).unwrap_or_default()])
            .collect();
        write_csv(&dir.join("saddle_distance.csv"), "iter,saddle_distance", &rows)?;
    }
    Ok(Outcome::Completed)
}

fn solution_path(dir: &Path) -> Result<PathBuf, CliError> {
    ["P.mat", "P_exact.mat"]
        .iter()
        .map(|f| dir.join(f))
        .find(|p| p.is_file())
        .ok_or_else(|| CliError::MissingSolution(dir.join("P.mat")))
}
