//! Symmetric eigendecomposition.
//!
//! Householder reduction to tridiagonal form followed by the implicit QL
//! iteration with Wilkinson-style shifts (the EISPACK `tred2`/`tql2` pair).
//! Work storage holds the transformation matrix transposed, so the inner
//! loops of both phases run over contiguous memory.

use super::{DenseSymMatrix, LinalgError};

/// QL iterations allowed per unit of dimension before giving up.
pub const QL_ITERATIONS_PER_DIM: usize = 100;

/// Eigenvalues in non-decreasing order with their orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    n: usize,
    eigenvalues: Vec<f64>,
    // eigenvector i occupies vectors[i*n..(i+1)*n]
    vectors: Vec<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.n..(i + 1) * self.n]
    }

    /// Entry `V_ij`, i.e. component `i` of eigenvector `j`.
    pub fn vector_entry(&self, i: usize, j: usize) -> f64 {
        self.vectors[j * self.n + i]
    }

    /// `V diag(f(λ)) Vᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> DenseSymMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.weighted_sum(&weights)
    }

    /// `Σ_i w_i v_i v_iᵀ` over all eigenpairs.
    pub fn weighted_sum(&self, weights: &[f64]) -> DenseSymMatrix {
        assert_eq!(weights.len(), self.n, "one weight per eigenpair");
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for (i, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let v = self.eigenvector(i);
            for a in 0..n {
                let t = w * v[a];
                if t == 0.0 {
                    continue;
                }
                let row = &mut out[a * n + a..(a + 1) * n];
                for (o, vb) in row.iter_mut().zip(&v[a..]) {
                    *o += t * vb;
                }
            }
        }
        for a in 0..n {
            for b in (a + 1)..n {
                out[b * n + a] = out[a * n + b];
            }
        }
        DenseSymMatrix::symmetrized(n, out)
    }
}

/// Full eigendecomposition of a symmetric matrix, eigenvalues ascending.
pub fn sym_eig(a: &DenseSymMatrix) -> Result<SpectralDecomposition, LinalgError> {
    let n = a.dim();
    if n == 0 {
        return Err(LinalgError::Empty);
    }
    // Symmetric input: the transposed work matrix equals A itself.
    let mut vt = a.as_slice().to_vec();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(n, &mut vt, &mut d, &mut e);
    ql_implicit(n, &mut vt, &mut d, &mut e)?;
    Ok(SpectralDecomposition {
        n,
        eigenvalues: d,
        vectors: vt,
    })
}

// `w[j*n + k]` holds V[k][j].
fn tridiagonalize(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |k: usize, j: usize| j * n + k;

    for j in 0..n {
        d[j] = w[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in &d[..i] {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = w[at(i - 1, j)];
                w[at(i, j)] = 0.0;
                w[at(j, i)] = 0.0;
            }
        } else {
            for dk in &mut d[..i] {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in &mut e[..i] {
                *ej = 0.0;
            }

            for j in 0..i {
                f = d[j];
                w[at(j, i)] = f;
                let col = &w[j * n + j + 1..j * n + i];
                g = e[j] + w[at(j, j)] * f + dot(col, &d[j + 1..i]);
                for (ek, ck) in e[j + 1..i].iter_mut().zip(col) {
                    *ek += ck * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                let col = &mut w[j * n..j * n + i];
                for k in j..i {
                    col[k] -= f * e[k] + g * d[k];
                }
                d[j] = w[at(i - 1, j)];
                w[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    // Accumulate transformations.
    for i in 0..n.saturating_sub(1) {
        w[at(n - 1, i)] = w[at(i, i)];
        w[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = w[at(k, i + 1)] / h;
            }
            let (lo, hi) = w.split_at_mut((i + 1) * n);
            let v = &hi[..=i];
            for j in 0..=i {
                let col = &mut lo[j * n..j * n + i + 1];
                let g = dot(v, col);
                for (ck, dk) in col.iter_mut().zip(&d[..=i]) {
                    *ck -= g * dk;
                }
            }
        }
        for k in 0..=i {
            w[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = w[at(n - 1, j)];
        w[at(n - 1, j)] = 0.0;
    }
    w[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Dot product with independent partial sums, so the adds pipeline instead of
/// waiting on each other.
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca.remainder().iter().zip(cb.remainder()).map(|(x, y)| x * y).sum();
    for (x, y) in ca.zip(cb) {
        for k in 0..8 {
            acc[k] += x[k] * y[k];
        }
    }
    (acc[0] + acc[4]) + (acc[1] + acc[5]) + (acc[2] + acc[6]) + (acc[3] + acc[7]) + tail
}

fn ql_implicit(n: usize, w: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let cap = QL_ITERATIONS_PER_DIM * n;
    let mut total_iter = 0usize;
    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;

    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }

        if m > l {
            loop {
                total_iter += 1;
                if total_iter > cap {
                    let residual = e.iter().map(|x| x * x).sum::<f64>().sqrt();
                    return Err(LinalgError::EigenNoConvergence {
                        iterations: cap,
                        residual,
                    });
                }

                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in &mut d[(l + 2)..n] {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    let (lo, hi) = w.split_at_mut((i + 1) * n);
                    let col_i = &mut lo[i * n..];
                    let col_i1 = &mut hi[..n];
                    for (vi, vi1) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                        let t = *vi1;
                        *vi1 = s * *vi + c * t;
                        *vi = c * *vi - s * t;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // Selection sort keeps eigenvectors paired with their eigenvalues.
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d.swap(i, k);
            let (lo, hi) = w.split_at_mut(k * n);
            lo[i * n..(i + 1) * n].swap_with_slice(&mut hi[..n]);
        }
    }
    Ok(())
}
