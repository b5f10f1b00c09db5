//! Measurements on computed density matrices: the exact spectral projector,
//! energy and subspace errors, occupation spectra, localized columns, Ritz
//! values and the saddle-point distance of the iteration.

use thiserror::Error;

use crate::linalg::{sym_eig, DenseSymMatrix, LinalgError, SpectralDecomposition};
use crate::solver::SolverState;

/// Eigenvalue separation below which `λ_N` and `λ_{N+1}` count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum DiagnosticsError {
    #[error("{what} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        max: usize,
    },
    #[error("empty range {lo}..={hi}")]
    EmptyRange { lo: usize, hi: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

fn check_count(what: &'static str, k: usize, n: usize) -> Result<(), DiagnosticsError> {
    if k == 0 || k > n {
        return Err(DiagnosticsError::IndexOutOfRange {
            what,
            index: k,
            max: n,
        });
    }
    Ok(())
}

fn warn_if_degenerate(eig: &SpectralDecomposition, n_occ: usize) {
    let ev = eig.eigenvalues();
    if n_occ < ev.len() && (ev[n_occ] - ev[n_occ - 1]).abs() <= DEGENERACY_TOL {
        log::warn!(
            "eigenvalues {} and {} coincide ({:e}); the occupied subspace depends on eigensolver ordering",
            n_occ,
            n_occ + 1,
            ev[n_occ - 1]
        );
    }
}

/// Orthogonal projector onto the `n_occ` lowest eigenvectors of `h`.
pub fn exact_density_matrix(
    h: &DenseSymMatrix,
    n_occ: usize,
) -> Result<DenseSymMatrix, DiagnosticsError> {
    let eig = sym_eig(h)?;
    exact_density_from(&eig, n_occ)
}

/// Same as [`exact_density_matrix`] with a precomputed decomposition.
pub fn exact_density_from(
    eig: &SpectralDecomposition,
    n_occ: usize,
) -> Result<DenseSymMatrix, DiagnosticsError> {
    check_count("occupied state", n_occ, eig.dim())?;
    warn_if_degenerate(eig, n_occ);
    let weights: Vec<f64> = (0..eig.dim())
        .map(|i| if i < n_occ { 1.0 } else { 0.0 })
        .collect();
    Ok(eig.weighted_sum(&weights))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnergyMetrics {
    /// `tr(HP)`
    pub tr_hp: f64,
    /// Sum of the `N` lowest eigenvalues of `H`.
    pub exact_energy: f64,
}

pub fn energy_gap_metrics(
    p: &DenseSymMatrix,
    h: &DenseSymMatrix,
    n_occ: usize,
) -> Result<EnergyMetrics, DiagnosticsError> {
    let eig = sym_eig(h)?;
    check_count("occupied state", n_occ, eig.dim())?;
    Ok(EnergyMetrics {
        tr_hp: h.trace_product(p)?,
        exact_energy: eig.eigenvalues()[..n_occ].iter().sum(),
    })
}

/// `Σ_{i≤N} ||φ_i − Pφ_i||²` over the `N` lowest eigenvectors `φ_i` of `H`.
pub fn space_approximation(
    p: &DenseSymMatrix,
    h: &DenseSymMatrix,
    n_occ: usize,
) -> Result<f64, DiagnosticsError> {
    let eig = sym_eig(h)?;
    space_approximation_from(p, &eig, n_occ)
}

pub fn space_approximation_from(
    p: &DenseSymMatrix,
    eig: &SpectralDecomposition,
    n_occ: usize,
) -> Result<f64, DiagnosticsError> {
    check_count("occupied state", n_occ, eig.dim())?;
    if p.dim() != eig.dim() {
        return Err(LinalgError::DimensionMismatch {
            left: p.dim(),
            right: eig.dim(),
        }
        .into());
    }
    warn_if_degenerate(eig, n_occ);
    Ok((0..n_occ)
        .map(|i| {
            let phi = eig.eigenvector(i);
            p.apply(phi)
                .iter()
                .zip(phi)
                .map(|(pp, ph)| (ph - pp) * (ph - pp))
                .sum::<f64>()
        })
        .sum())
}

/// Eigen-expansion `P = Σ f_i φ_i φ_iᵀ` with `f` sorted descending.
#[derive(Clone, Debug)]
pub struct OccupationSpectrum {
    pub values: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl OccupationSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}

pub fn occupation_numbers(p: &DenseSymMatrix) -> Result<OccupationSpectrum, DiagnosticsError> {
    let eig = sym_eig(p)?;
    let n = eig.dim();
    let order: Vec<usize> = (0..n).rev().collect();
    Ok(OccupationSpectrum {
        values: order.iter().map(|&i| eig.eigenvalues()[i]).collect(),
        basis: order.iter().map(|&i| eig.eigenvector(i).to_vec()).collect(),
    })
}

/// `Σ_{i=lo}^{hi} f_i φ_i φ_iᵀ` with 1-based indices into the descending order.
pub fn filtered_density_matrix(
    spec: &OccupationSpectrum,
    lo: usize,
    hi: usize,
) -> Result<DenseSymMatrix, DiagnosticsError> {
    let n = spec.len();
    check_count("lower band", lo, n)?;
    check_count("upper band", hi, n)?;
    if lo > hi {
        return Err(DiagnosticsError::EmptyRange { lo, hi });
    }
    let mut out = vec![0.0; n * n];
    for idx in (lo - 1)..hi {
        let f = spec.values[idx];
        let v = &spec.basis[idx];
        for a in 0..n {
            let t = f * v[a];
            for b in a..n {
                out[a * n + b] += t * v[b];
            }
        }
    }
    for a in 0..n {
        for b in (a + 1)..n {
            out[b * n + a] = out[a * n + b];
        }
    }
    Ok(DenseSymMatrix::symmetrized(n, out))
}

/// Columns `P e_s` for each 0-based grid site `s`.
pub fn delta_projections(
    p: &DenseSymMatrix,
    sites: &[usize],
) -> Result<Vec<Vec<f64>>, DiagnosticsError> {
    let n = p.dim();
    sites
        .iter()
        .map(|&s| {
            if s >= n {
                Err(DiagnosticsError::IndexOutOfRange {
                    what: "site",
                    index: s,
                    max: n - 1,
                })
            } else {
                // P is symmetric: column s equals row s.
                Ok(p.row(s).to_vec())
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct RitzComparison {
    /// Ascending eigenvalues of `√P_k H √P_k` on the top-`k` occupied subspace.
    pub eigs_ph: Vec<f64>,
    /// The `k` lowest eigenvalues of `H`.
    pub eigs_h: Vec<f64>,
}

/// Compares the spectrum of `PH` with that of `H`.
///
/// `PH` is not symmetric. We use the congruent symmetric matrix
/// `√P_k H √P_k`, where `P_k = Σ_{i≤k} f_i φ_i φ_iᵀ` keeps the `k` largest
/// occupations (negative ones clipped to 0), and diagonalize it in the basis
/// `φ_1..φ_k`. For a projector of rank `k` this is exactly the nonzero
/// spectrum of `PH`.
pub fn ritz_compare(
    p: &DenseSymMatrix,
    h: &DenseSymMatrix,
    k: usize,
) -> Result<RitzComparison, DiagnosticsError> {
    let n = h.dim();
    h.check_dim(p)?;
    check_count("Ritz count", k, n)?;
    let occ = occupation_numbers(p)?;
    let sqrt_f: Vec<f64> = occ.values[..k].iter().map(|f| f.max(0.0).sqrt()).collect();
    let h_phi: Vec<Vec<f64>> = occ.basis[..k].iter().map(|v| h.apply(v)).collect();
    let mut m = vec![0.0; k * k];
    for i in 0..k {
        for j in i..k {
            let hij: f64 = occ.basis[i].iter().zip(&h_phi[j]).map(|(a, b)| a * b).sum();
            let v = sqrt_f[i] * sqrt_f[j] * hij;
            m[i * k + j] = v;
            m[j * k + i] = v;
        }
    }
    let small = sym_eig(&DenseSymMatrix::symmetrized(k, m))?;
    let full = sym_eig(h)?;
    Ok(RitzComparison {
        eigs_ph: small.eigenvalues().to_vec(),
        eigs_h: full.eigenvalues()[..k].to_vec(),
    })
}

/// `θ_i = v_iᵀ P v_i` for the eigenvectors `v_i` of `H` in ascending order.
pub fn band_occupations(
    p: &DenseSymMatrix,
    h: &DenseSymMatrix,
) -> Result<Vec<f64>, DiagnosticsError> {
    h.check_dim(p)?;
    let eig = sym_eig(h)?;
    Ok((0..eig.dim())
        .map(|i| {
            let v = eig.eigenvector(i);
            p.apply(v).iter().zip(v).map(|(a, b)| a * b).sum()
        })
        .collect())
}

/// `λ||b − b*||² + r||d − d*||² + λ||Q − Q*||² + r||R − R*||²`.
pub fn saddle_distance(state: &SolverState, reference: &SolverState, lambda: f64, r: f64) -> f64 {
    let sq = |a: &DenseSymMatrix, b: &DenseSymMatrix| {
        a.as_slice()
            .iter()
            .zip(b.as_slice())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
    };
    lambda * sq(&state.b, &reference.b)
        + r * sq(&state.d, &reference.d)
        + lambda * sq(&state.q, &reference.q)
        + r * sq(&state.r, &reference.r)
}

/// Fraction of entries with `|P_ij| < rel·max|P_ij|`.
pub fn sparsity(p: &DenseSymMatrix, rel: f64) -> f64 {
    let cut = rel * p.max_abs();
    let small = p.as_slice().iter().filter(|x| x.abs() < cut).count();
    small as f64 / p.as_slice().len() as f64
}
