use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use super::LinalgError;

/// Dense real symmetric matrix stored in full row-major layout.
///
/// Every constructor that is not validated symmetrizes its storage as
/// `(A + Aᵀ)/2`, so `a[(i, j)] == a[(j, i)]` holds bitwise for every value
/// of this type.
#[derive(Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

/// Relative asymmetry accepted by the validating constructors.
pub const SYMMETRY_TOL: f64 = 1e-12;

impl DenseSymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, s: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = s;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Validating constructor from row-major entries.
    ///
    /// Rejects non-finite entries and asymmetry larger than
    /// `1e-12 · max(1, max|a_ij|)`; accepted input is symmetrized exactly.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self, LinalgError> {
        if n == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != n * n {
            return Err(LinalgError::DataLength {
                n,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        let scale = data.iter().fold(1.0_f64, |m, x| m.max(x.abs()));
        let mut worst = (0.0, 0, 0);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = (data[i * n + j] - data[j * n + i]).abs();
                if d > worst.0 {
                    worst = (d, i, j);
                }
            }
        }
        if worst.0 > SYMMETRY_TOL * scale {
            return Err(LinalgError::Asymmetric {
                row: worst.1,
                col: worst.2,
                diff: worst.0,
            });
        }
        Ok(Self::symmetrized(n, data))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(LinalgError::RowLength {
                    row: i,
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    /// Builds the matrix from arbitrary row-major storage by averaging it
    /// with its transpose. No tolerance check is made.
    pub fn symmetrized(n: usize, mut data: Vec<f64>) -> Self {
        assert_eq!(data.len(), n * n, "row-major storage must hold n*n entries");
        for i in 0..n {
            for j in (i + 1)..n {
                let avg = 0.5 * (data[i * n + j] + data[j * n + i]);
                data[i * n + j] = avg;
                data[j * n + i] = avg;
            }
        }
        Self { n, data }
    }

    /// Entrywise map. `f` is applied to the upper triangle and mirrored, so
    /// symmetry is preserved exactly.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = f(self.data[i * n + j]);
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.n + i]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Entrywise ℓ1 norm `Σ|a_ij|`.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|x| x.abs()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// `tr(AB) = Σ_ij A_ij B_ji`.
    pub fn trace_product(&self, other: &Self) -> Result<f64, LinalgError> {
        self.check_dim(other)?;
        // Both operands are symmetric, so B_ji = B_ij.
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// `||A − B||_F`.
    pub fn distance(&self, other: &Self) -> Result<f64, LinalgError> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt())
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|x| s * x)
    }

    /// `a·self + b·other`.
    pub fn lin_comb(&self, a: f64, other: &Self, b: f64) -> Self {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self { n: self.n, data }
    }

    /// Adds `s` to every diagonal entry.
    pub fn shift_diagonal(&self, s: f64) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.data[i * self.n + i] += s;
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "dimension mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Dense product `AB` as plain row-major storage; the result is generally
    /// not symmetric.
    pub fn matmul_raw(&self, other: &Self) -> Vec<f64> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                let b_row = &other.data[k * n..(k + 1) * n];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<(), LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for DenseSymMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl Add for &DenseSymMatrix {
    type Output = DenseSymMatrix;

    fn add(self, rhs: &DenseSymMatrix) -> DenseSymMatrix {
        self.lin_comb(1.0, rhs, 1.0)
    }
}

impl Sub for &DenseSymMatrix {
    type Output = DenseSymMatrix;

    fn sub(self, rhs: &DenseSymMatrix) -> DenseSymMatrix {
        self.lin_comb(1.0, rhs, -1.0)
    }
}

impl Mul<&DenseSymMatrix> for f64 {
    type Output = DenseSymMatrix;

    fn mul(self, rhs: &DenseSymMatrix) -> DenseSymMatrix {
        rhs.scale(self)
    }
}

impl fmt::Debug for DenseSymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseSymMatrix({}x{})", self.n, self.n)?;
        if self.n <= 8 {
            for i in 0..self.n {
                writeln!(f, "  {:?}", self.row(i))?;
            }
        }
        Ok(())
    }
}
