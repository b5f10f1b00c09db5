//! Dense symmetric matrices, the symmetric eigensolver and the three
//! closed-form kernels of the splitting iteration.

mod eigen;
pub mod io;
mod kernels;
mod matrix;

pub use eigen::{sym_eig, SpectralDecomposition, QL_ITERATIONS_PER_DIM};
pub use kernels::{soft_threshold, spectral_clamp, trace_shift_project};
pub use matrix::{DenseSymMatrix, SYMMETRY_TOL};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix dimension must be positive")]
    Empty,
    #[error("expected {} entries for n = {n}, got {len}", n * n)]
    DataLength { n: usize, len: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not symmetric: |a[{row},{col}] - a[{col},{row}]| = {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("eigensolver did not converge after {iterations} QL iterations (off-diagonal residual {residual:e})")]
    EigenNoConvergence { iterations: usize, residual: f64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
