//! Closed-form proximal and projection maps used by the split Bregman step.

use super::{sym_eig, DenseSymMatrix, LinalgError};

/// Entrywise shrinkage `sign(a)·max(|a| − t, 0)`, the proximal map of `t·||·||_1`.
pub fn soft_threshold(a: &DenseSymMatrix, t: f64) -> DenseSymMatrix {
    assert!(t >= 0.0, "threshold must be nonnegative, got {t}");
    if t == 0.0 {
        return a.clone();
    }
    a.map(|x| {
        let m = x.abs() - t;
        if m > 0.0 {
            m.copysign(x)
        } else {
            0.0
        }
    })
}

/// Frobenius projection onto the affine set `{P : tr P = N}`.
///
/// The trace defect is spread uniformly over the diagonal:
/// `B − ((tr B − N)/n)·I`. Off-diagonal entries are untouched.
pub fn trace_shift_project(b: &DenseSymMatrix, n_target: f64) -> DenseSymMatrix {
    let shift = (b.trace() - n_target) / b.dim() as f64;
    b.shift_diagonal(-shift)
}

/// Projection onto `{R : 0 ⪯ R ⪯ I}` by clipping the spectrum to `[0, 1]`.
pub fn spectral_clamp(a: &DenseSymMatrix) -> Result<DenseSymMatrix, LinalgError> {
    let eig = sym_eig(a)?;
    Ok(eig.reconstruct_with(|l| l.clamp(0.0, 1.0)))
}
