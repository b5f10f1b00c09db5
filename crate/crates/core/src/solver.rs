//! Split Bregman iteration for
//!
//! ```text
//! min  tr(HP) + ||P||_1 / μ   over   C = { P = Pᵀ, tr P = N, 0 ⪯ P ⪯ I }
//! ```
//!
//! The problem is split as `Q = P`, `R = P` and each sweep performs, in order,
//!
//! 1. `P ← B − ((tr B − N)/n)·I`, with
//!    `B = λ/(λ+r)·(Q − b) + r/(λ+r)·(R − d) − H/(λ+r)`
//! 2. `Q ← Shrink(P + b, 1/(λμ))`
//! 3. `R ← V·clip(D, 0, 1)·Vᵀ` where `V D Vᵀ = P + d`
//! 4. `b ← b + P − Q`
//! 5. `d ← d + P − R`
//!
//! The quantity `λ||b − b*||² + r||d − d*||² + λ||Q − Q*||² + r||R − R*||²`
//! is non-increasing along the iterates for every saddle point
//! `(P*, Q*, R*, b*, d*)`; see [`crate::diagnostics::saddle_distance`].

use thiserror::Error;

use crate::diagnostics;
use crate::linalg::{
    soft_threshold, spectral_clamp, sym_eig, trace_shift_project, DenseSymMatrix, LinalgError,
};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Membership tolerance for a user-supplied starting point.
pub const INITIAL_FEASIBILITY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid solver parameter `{field}`: {msg}")]
    InvalidParam { field: &'static str, msg: String },
    #[error("initial matrix violates the {constraint} constraint: {msg}")]
    InfeasibleInitial {
        constraint: &'static str,
        msg: String,
    },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverParams {
    /// ℓ1 weight is `1/mu`; `f64::INFINITY` switches the ℓ1 term off.
    pub mu: f64,
    /// Penalty on `P = Q`.
    pub lambda: f64,
    /// Penalty on `P = R`.
    pub r: f64,
    /// Target trace (number of electrons).
    pub n_electrons: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub record_every: usize,
}

impl SolverParams {
    pub fn new(mu: f64, n_electrons: f64) -> Self {
        Self {
            mu,
            lambda: 1.0,
            r: 1.0,
            n_electrons,
            max_iter: DEFAULT_MAX_ITER,
            tol: DEFAULT_TOL,
            record_every: 1,
        }
    }

    pub fn with_penalties(mut self, lambda: f64, r: f64) -> Self {
        self.lambda = lambda;
        self.r = r;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_record_every(mut self, every: usize) -> Self {
        self.record_every = every;
        self
    }

    /// Shrinkage threshold `1/(λμ)`; zero when `μ = ∞`.
    pub fn shrink_threshold(&self) -> f64 {
        if self.mu.is_infinite() {
            0.0
        } else {
            1.0 / (self.lambda * self.mu)
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), SolverError> {
        fn positive(field: &'static str, v: f64) -> Result<(), SolverError> {
            if v > 0.0 && !v.is_nan() {
                Ok(())
            } else {
                Err(SolverError::InvalidParam {
                    field,
                    msg: format!("must be positive, got {v}"),
                })
            }
        }
        positive("mu", self.mu)?;
        positive("lambda", self.lambda)?;
        positive("r", self.r)?;
        positive("tol", self.tol)?;
        if !self.lambda.is_finite() || !self.r.is_finite() {
            return Err(SolverError::InvalidParam {
                field: if self.lambda.is_finite() { "r" } else { "lambda" },
                msg: "must be finite".into(),
            });
        }
        if !(self.n_electrons.is_finite() && self.n_electrons > 0.0) {
            return Err(SolverError::InvalidParam {
                field: "n_electrons",
                msg: format!("must be positive, got {}", self.n_electrons),
            });
        }
        if self.n_electrons > n as f64 {
            return Err(SolverError::InvalidParam {
                field: "n_electrons",
                msg: format!("{} exceeds the dimension {n}", self.n_electrons),
            });
        }
        if self.max_iter == 0 {
            return Err(SolverError::InvalidParam {
                field: "max_iter",
                msg: "must be at least 1".into(),
            });
        }
        if self.record_every == 0 {
            return Err(SolverError::InvalidParam {
                field: "record_every",
                msg: "must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// The five iterates of the splitting.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub p: DenseSymMatrix,
    pub q: DenseSymMatrix,
    pub r: DenseSymMatrix,
    pub b: DenseSymMatrix,
    pub d: DenseSymMatrix,
    pub iteration: usize,
}

impl SolverState {
    pub fn dim(&self) -> usize {
        self.p.dim()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub objective: f64,
    pub residual_q: f64,
    pub residual_r: f64,
    pub delta_p: f64,
    pub saddle_distance: Option<f64>,
}

impl IterationRecord {
    fn convergence_measure(&self) -> f64 {
        self.residual_q.max(self.residual_r).max(self.delta_p)
    }
}

#[derive(Clone, Debug)]
pub struct SolverResult {
    pub state: SolverState,
    pub converged: bool,
    pub iterations_used: usize,
    pub history: Vec<IterationRecord>,
}

impl SolverResult {
    /// Trace-feasible solution.
    pub fn p(&self) -> &DenseSymMatrix {
        &self.state.p
    }

    /// Spectrally feasible surrogate.
    pub fn r(&self) -> &DenseSymMatrix {
        &self.state.r
    }

    pub fn last_record(&self) -> &IterationRecord {
        self.history.last().expect("history always holds the final iterate")
    }
}

/// `tr(HP) + ||P||_1/μ`; the ℓ1 term vanishes for `μ = ∞`.
pub fn objective(p: &DenseSymMatrix, h: &DenseSymMatrix, mu: f64) -> Result<f64, LinalgError> {
    let linear = h.trace_product(p)?;
    if mu.is_infinite() {
        Ok(linear)
    } else {
        Ok(linear + p.l1_norm() / mu)
    }
}

/// Distance of `P` from the set `C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feasibility {
    /// `||P − Pᵀ||_F`
    pub asym: f64,
    /// `|tr P − N|`
    pub trace_err: f64,
    /// `max(0, −λ_min)`
    pub eig_lo: f64,
    /// `max(0, λ_max − 1)`
    pub eig_hi: f64,
}

impl Feasibility {
    pub fn max(&self) -> f64 {
        self.asym
            .max(self.trace_err)
            .max(self.eig_lo)
            .max(self.eig_hi)
    }
}

pub fn feasibility(p: &DenseSymMatrix, n_electrons: f64) -> Result<Feasibility, LinalgError> {
    let n = p.dim();
    let asym = {
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                let d = p[(i, j)] - p[(j, i)];
                acc += d * d;
            }
        }
        acc.sqrt()
    };
    let eig = sym_eig(p)?;
    let lo = eig.eigenvalues()[0];
    let hi = eig.eigenvalues()[n - 1];
    Ok(Feasibility {
        asym,
        trace_err: (p.trace() - n_electrons).abs(),
        eig_lo: (-lo).max(0.0),
        eig_hi: (hi - 1.0).max(0.0),
    })
}

/// Default start `P0 = (N/n)·I`, or a caller-supplied member of `C`.
pub fn init_state(
    h: &DenseSymMatrix,
    params: &SolverParams,
    initial: Option<&DenseSymMatrix>,
) -> Result<SolverState, SolverError> {
    let n = h.dim();
    params.validate(n)?;
    let p0 = match initial {
        None => DenseSymMatrix::scaled_identity(n, params.n_electrons / n as f64),
        Some(p) => {
            if p.dim() != n {
                return Err(LinalgError::DimensionMismatch {
                    left: n,
                    right: p.dim(),
                }
                .into());
            }
            let f = feasibility(p, params.n_electrons)?;
            if f.trace_err > INITIAL_FEASIBILITY_TOL {
                return Err(SolverError::InfeasibleInitial {
                    constraint: "trace",
                    msg: format!(
                        "tr P = {}, expected {}",
                        p.trace(),
                        params.n_electrons
                    ),
                });
            }
            if f.eig_lo > INITIAL_FEASIBILITY_TOL || f.eig_hi > INITIAL_FEASIBILITY_TOL {
                return Err(SolverError::InfeasibleInitial {
                    constraint: "spectrum",
                    msg: format!(
                        "eigenvalues leave [0, 1] by {:e} below / {:e} above",
                        f.eig_lo, f.eig_hi
                    ),
                });
            }
            p.clone()
        }
    };
    Ok(SolverState {
        q: p0.clone(),
        r: p0.clone(),
        b: DenseSymMatrix::zeros(n),
        d: DenseSymMatrix::zeros(n),
        p: p0,
        iteration: 0,
    })
}

/// One sweep of the splitting iteration.
pub fn step(
    state: &SolverState,
    h: &DenseSymMatrix,
    params: &SolverParams,
) -> Result<SolverState, SolverError> {
    let n = state.dim();
    h.check_dim(&state.p)?;
    let (lambda, r) = (params.lambda, params.r);
    let wq = lambda / (lambda + r);
    let wr = r / (lambda + r);
    let wh = 1.0 / (lambda + r);

    let (q, rr, b, d) = (
        state.q.as_slice(),
        state.r.as_slice(),
        state.b.as_slice(),
        state.d.as_slice(),
    );
    let bk: Vec<f64> = (0..n * n)
        .map(|k| wq * (q[k] - b[k]) + wr * (rr[k] - d[k]) - wh * h.as_slice()[k])
        .collect();
    let bk = DenseSymMatrix::symmetrized(n, bk);

    let p = trace_shift_project(&bk, params.n_electrons);
    let q = soft_threshold(&(&p + &state.b), params.shrink_threshold());
    let r = spectral_clamp(&(&p + &state.d))?;
    let b = &state.b + &(&p - &q);
    let d = &state.d + &(&p - &r);

    Ok(SolverState {
        p,
        q,
        r,
        b,
        d,
        iteration: state.iteration + 1,
    })
}

fn record(
    state: &SolverState,
    prev_p: &DenseSymMatrix,
    h: &DenseSymMatrix,
    params: &SolverParams,
    reference: Option<&SolverState>,
) -> Result<IterationRecord, SolverError> {
    Ok(IterationRecord {
        iteration: state.iteration,
        objective: objective(&state.p, h, params.mu)?,
        residual_q: state.p.distance(&state.q)?,
        residual_r: state.p.distance(&state.r)?,
        delta_p: state.p.distance(prev_p)?,
        saddle_distance: reference
            .map(|rf| diagnostics::saddle_distance(state, rf, params.lambda, params.r)),
    })
}

/// Iterates [`step`] until the primal residuals and the change in `P` all drop
/// below `tol·max(1, ||P||_F)`, or `max_iter` sweeps have run.
pub fn solve(
    h: &DenseSymMatrix,
    params: &SolverParams,
    initial: Option<&DenseSymMatrix>,
) -> Result<SolverResult, SolverError> {
    solve_monitored(h, params, initial, None)
}

/// [`solve`] that also tracks the distance to a known saddle point in every
/// history record. Iteration 0 (the starting point) is recorded as well.
pub fn solve_monitored(
    h: &DenseSymMatrix,
    params: &SolverParams,
    initial: Option<&DenseSymMatrix>,
    reference: Option<&SolverState>,
) -> Result<SolverResult, SolverError> {
    let state = init_state(h, params, initial)?;
    if let Some(rf) = reference {
        h.check_dim(&rf.p)?;
    }
    run_from(state, h, params, reference)
}

/// Continues the iteration from an arbitrary state.
pub fn run_from(
    mut state: SolverState,
    h: &DenseSymMatrix,
    params: &SolverParams,
    reference: Option<&SolverState>,
) -> Result<SolverResult, SolverError> {
    params.validate(h.dim())?;
    let mut history = vec![record(&state, &state.p, h, params, reference)?];
    let start = state.iteration;
    let mut converged = false;

    for k in 1..=params.max_iter {
        let next = step(&state, h, params)?;
        let rec = record(&next, &state.p, h, params, reference)?;
        state = next;
        converged = rec.convergence_measure() <= params.tol * state.p.frobenius_norm().max(1.0);
        let last = converged || k == params.max_iter;
        if k % params.record_every == 0 || last {
            history.push(rec);
        }
        if last {
            break;
        }
    }

    if !converged {
        log::warn!(
            "split Bregman stopped after {} iterations without meeting tol = {:e}",
            params.max_iter,
            params.tol
        );
    }
    Ok(SolverResult {
        iterations_used: state.iteration - start,
        state,
        converged,
        history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example2_h() -> DenseSymMatrix {
        DenseSymMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 2.0, 2.0],
            vec![0.0, 2.0, 2.0],
        ])
        .unwrap()
    }

    #[test]
    fn default_init() {
        let h = DenseSymMatrix::zeros(4);
        let s = init_state(&h, &SolverParams::new(1.0, 2.0), None).unwrap();
        assert_eq!(s.p, DenseSymMatrix::scaled_identity(4, 0.5));
        assert_eq!(s.q, s.p);
        assert_eq!(s.r, s.p);
        assert_eq!(s.b, DenseSymMatrix::zeros(4));
        assert_eq!(s.d, DenseSymMatrix::zeros(4));
        assert_eq!(s.iteration, 0);
    }

    #[test]
    fn projector_start_is_accepted() {
        let h = example2_h();
        let p1 = DenseSymMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
        let s = init_state(&h, &SolverParams::new(1.0, 1.0), Some(&p1)).unwrap();
        assert_eq!(s.p, p1);
    }

    #[test]
    fn infeasible_starts_are_rejected() {
        let h = example2_h();
        let params = SolverParams::new(1.0, 1.0);
        let bad_trace = DenseSymMatrix::from_diagonal(&[1.0, 1.0, 0.0]);
        assert!(matches!(
            init_state(&h, &params, Some(&bad_trace)),
            Err(SolverError::InfeasibleInitial { constraint: "trace", .. })
        ));
        let bad_spec = DenseSymMatrix::from_diagonal(&[1.2, -0.2, 0.0]);
        assert!(matches!(
            init_state(&h, &params, Some(&bad_spec)),
            Err(SolverError::InfeasibleInitial { constraint: "spectrum", .. })
        ));
    }

    #[test]
    fn parameter_validation_names_the_field() {
        let h = example2_h();
        let field = |p: SolverParams| match init_state(&h, &p, None) {
            Err(SolverError::InvalidParam { field, .. }) => field,
            other => panic!("expected InvalidParam, got {other:?}"),
        };
        assert_eq!(field(SolverParams::new(0.0, 1.0)), "mu");
        assert_eq!(field(SolverParams::new(-1.0, 1.0)), "mu");
        assert_eq!(field(SolverParams::new(1.0, 0.0)), "n_electrons");
        assert_eq!(field(SolverParams::new(1.0, 4.0)), "n_electrons");
        assert_eq!(field(SolverParams::new(1.0, 1.0).with_penalties(0.0, 1.0)), "lambda");
        assert_eq!(field(SolverParams::new(1.0, 1.0).with_penalties(1.0, -2.0)), "r");
        assert_eq!(field(SolverParams::new(1.0, 1.0).with_tol(0.0)), "tol");
        assert_eq!(field(SolverParams::new(1.0, 1.0).with_max_iter(0)), "max_iter");
        // N = n is a valid, if trivial, problem
        assert!(init_state(&h, &SolverParams::new(1.0, 3.0), None).is_ok());
    }

    #[test]
    fn objective_values() {
        let h = example2_h();
        let p1 = DenseSymMatrix::from_diagonal(&[1.0, 0.0, 0.0]);
        let p0 = DenseSymMatrix::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.5, -0.5],
            vec![0.0, -0.5, 0.5],
        ])
        .unwrap();
        assert_eq!(objective(&p1, &h, 1.0).unwrap(), 2.0);
        assert_eq!(objective(&p0, &h, 1.0).unwrap(), 2.0);
        assert_eq!(objective(&DenseSymMatrix::zeros(3), &h, 7.0).unwrap(), 0.0);
        assert_eq!(objective(&p1, &h, f64::INFINITY).unwrap(), 1.0);
    }

    #[test]
    fn feasibility_diagonal_case() {
        let p = DenseSymMatrix::from_diagonal(&[1.2, -0.2]);
        let f = feasibility(&p, 1.0).unwrap();
        assert!(f.trace_err < 1e-15);
        assert!((f.eig_lo - 0.2).abs() < 1e-15);
        assert!((f.eig_hi - 0.2).abs() < 1e-15);
        assert_eq!(f.asym, 0.0);

        let p = DenseSymMatrix::scaled_identity(5, 0.4);
        assert_eq!(feasibility(&p, 2.0).unwrap().max(), 0.0);
    }

    #[test]
    fn zero_hamiltonian_without_l1_is_stationary() {
        let h = DenseSymMatrix::zeros(4);
        let params = SolverParams::new(f64::INFINITY, 2.0);
        let s0 = init_state(&h, &params, None).unwrap();
        let s1 = step(&s0, &h, &params).unwrap();
        for (a, b) in [(&s0.p, &s1.p), (&s0.q, &s1.q), (&s0.r, &s1.r), (&s0.b, &s1.b), (&s0.d, &s1.d)] {
            assert!(a.distance(b).unwrap() < 1e-15);
        }
        assert_eq!(s1.iteration, 1);
    }

    #[test]
    fn max_iter_exhaustion_is_not_an_error() {
        let h = example2_h();
        let params = SolverParams::new(1.0, 1.0).with_max_iter(3).with_tol(1e-14);
        let res = solve(&h, &params, None).unwrap();
        assert!(!res.converged);
        assert_eq!(res.iterations_used, 3);
        assert_eq!(res.history.len(), 4);
        assert_eq!(res.last_record().iteration, 3);
    }

    #[test]
    fn record_every_keeps_the_final_iterate() {
        let h = example2_h();
        let params = SolverParams::new(1.0, 1.0).with_max_iter(10).with_record_every(4).with_tol(1e-14);
        let res = solve(&h, &params, None).unwrap();
        let iters: Vec<usize> = res.history.iter().map(|r| r.iteration).collect();
        assert_eq!(iters, vec![0, 4, 8, 10]);
    }

    #[test]
    fn two_level_without_l1() {
        let h = DenseSymMatrix::from_diagonal(&[1.0, 2.0]);
        let params = SolverParams::new(f64::INFINITY, 1.0).with_tol(1e-10);
        let res = solve(&h, &params, None).unwrap();
        assert!(res.converged);
        let target = DenseSymMatrix::from_diagonal(&[1.0, 0.0]);
        assert!(res.p().distance(&target).unwrap() < 1e-8);
    }
}
