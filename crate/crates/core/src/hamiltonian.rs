//! Discretized one-dimensional Hamiltonians `H = −½Δ + V` on a periodic grid
//! (ħ = m = 1), and loading of user-supplied matrices.

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::linalg::{io, DenseSymMatrix, LinalgError};

#[derive(Debug, Error)]
pub enum HamiltonianError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid potential parameter `{field}`: {msg}")]
    Invalid { field: &'static str, msg: String },
    #[error("failed to load matrix: {0}")]
    Load(#[from] LinalgError),
}

/// Uniform periodic grid `x_i = i·h`, `h = L/n`, on `[0, L)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid1D {
    length: f64,
    n: usize,
}

impl Grid1D {
    pub fn new(length: f64, n: usize) -> Result<Self, HamiltonianError> {
        if !(length.is_finite() && length > 0.0) {
            return Err(HamiltonianError::Grid(format!(
                "length must be positive, got {length}"
            )));
        }
        if n < 3 {
            return Err(HamiltonianError::Grid(format!(
                "need at least 3 points, got {n}"
            )));
        }
        Ok(Self { length, n })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.spacing()
    }

    /// Signed minimum-image separation `a − b` on the periodic domain.
    pub fn periodic_delta(&self, a: f64, b: f64) -> f64 {
        let d = a - b;
        d - self.length * (d / self.length).round()
    }
}

/// Gaussian-well array `V(x) = −V0 Σ_j exp(−(x − x_j)²/δ²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KronigPenneyParams {
    pub well_depth: f64,
    pub width: f64,
    pub centers: Vec<f64>,
}

impl KronigPenneyParams {
    pub const DEFAULT_DEPTH: f64 = 1.0;
    pub const DEFAULT_WIDTH: f64 = 3.0;
    pub const DEFAULT_WELLS: usize = 10;

    /// `n_at` equally spaced wells at `x_j = L·j/(n_at + 1)`, `j = 1..=n_at`.
    pub fn evenly_spaced(length: f64, well_depth: f64, width: f64, n_at: usize) -> Self {
        let centers = (1..=n_at)
            .map(|j| length * j as f64 / (n_at + 1) as f64)
            .collect();
        Self {
            well_depth,
            width,
            centers,
        }
    }

    /// Ten wells of depth 1 and width 3 on the given domain.
    pub fn defaults(length: f64) -> Self {
        Self::evenly_spaced(
            length,
            Self::DEFAULT_DEPTH,
            Self::DEFAULT_WIDTH,
            Self::DEFAULT_WELLS,
        )
    }

    pub fn wells(&self) -> usize {
        self.centers.len()
    }

    pub fn validate(&self, grid: &Grid1D) -> Result<(), HamiltonianError> {
        // A zero depth is allowed: it is the free-electron limit.
        if !(self.well_depth.is_finite() && self.well_depth >= 0.0) {
            return Err(HamiltonianError::Invalid {
                field: "well_depth",
                msg: format!("must be nonnegative, got {}", self.well_depth),
            });
        }
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(HamiltonianError::Invalid {
                field: "width",
                msg: format!("must be positive, got {}", self.width),
            });
        }
        if self.centers.is_empty() {
            return Err(HamiltonianError::Invalid {
                field: "centers",
                msg: "at least one well is required".into(),
            });
        }
        if let Some(c) = self
            .centers
            .iter()
            .find(|c| !(c.is_finite() && **c >= 0.0 && **c < grid.length()))
        {
            return Err(HamiltonianError::Invalid {
                field: "centers",
                msg: format!("center {c} outside [0, {})", grid.length()),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianModel {
    FreeLaplacian,
    ModifiedKronigPenney(KronigPenneyParams),
    FromFile(PathBuf),
}

impl HamiltonianModel {
    pub fn build(&self, grid: &Grid1D) -> Result<DenseSymMatrix, HamiltonianError> {
        match self {
            Self::FreeLaplacian => Ok(build_laplacian_1d(grid)),
            Self::ModifiedKronigPenney(kp) => build_kronig_penney(grid, kp),
            Self::FromFile(path) => load_matrix(path),
        }
    }
}

/// Central-difference `−½Δ` with periodic wraparound.
pub fn build_laplacian_1d(grid: &Grid1D) -> DenseSymMatrix {
    let n = grid.points();
    let h2 = grid.spacing() * grid.spacing();
    let diag = 1.0 / h2;
    let off = -0.5 / h2;
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        data[i * n + i] = diag;
        data[i * n + (i + 1) % n] = off;
        data[i * n + (i + n - 1) % n] = off;
    }
    DenseSymMatrix::symmetrized(n, data)
}

/// Potential sampled at the grid points, using minimum-image distances.
pub fn sample_kp_potential(
    grid: &Grid1D,
    kp: &KronigPenneyParams,
) -> Result<Vec<f64>, HamiltonianError> {
    kp.validate(grid)?;
    let inv_w2 = 1.0 / (kp.width * kp.width);
    Ok((0..grid.points())
        .map(|i| {
            let x = grid.x(i);
            -kp.well_depth
                * kp
                    .centers
                    .iter()
                    .map(|&c| {
                        let d = grid.periodic_delta(x, c);
                        (-d * d * inv_w2).exp()
                    })
                    .sum::<f64>()
        })
        .collect())
}

pub fn build_kronig_penney(
    grid: &Grid1D,
    kp: &KronigPenneyParams,
) -> Result<DenseSymMatrix, HamiltonianError> {
    let v = sample_kp_potential(grid, kp)?;
    let n = grid.points();
    let lap = build_laplacian_1d(grid);
    let mut data = lap.as_slice().to_vec();
    for (i, vi) in v.iter().enumerate() {
        data[i * n + i] += vi;
    }
    Ok(DenseSymMatrix::symmetrized(n, data))
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseSymMatrix, HamiltonianError> {
    Ok(io::read_matrix(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eig;

    #[test]
    fn grid_validation() {
        assert!(Grid1D::new(1.0, 2).is_err());
        assert!(Grid1D::new(0.0, 8).is_err());
        assert!(Grid1D::new(-1.0, 8).is_err());
        let g = Grid1D::new(100.0, 256).unwrap();
        assert_eq!(g.spacing(), 100.0 / 256.0);
    }

    #[test]
    fn laplacian_stencil_n4() {
        let g = Grid1D::new(4.0, 4).unwrap();
        let h = build_laplacian_1d(&g);
        for i in 0..4 {
            assert_eq!(h[(i, i)], 1.0);
            assert_eq!(h[(i, (i + 1) % 4)], -0.5);
            assert_eq!(h[(i, (i + 3) % 4)], -0.5);
            assert_eq!(h[(i, (i + 2) % 4)], 0.0);
            assert_eq!(h.row(i).iter().sum::<f64>(), 0.0);
        }
        let eig = sym_eig(&h).unwrap();
        for (l, t) in eig.eigenvalues().iter().zip([0.0, 1.0, 1.0, 2.0]) {
            assert!((l - t).abs() < 1e-14, "{l} vs {t}");
        }
    }

    #[test]
    fn laplacian_ground_state_is_constant() {
        for n in [3, 7, 16, 33] {
            let g = Grid1D::new(10.0, n).unwrap();
            let eig = sym_eig(&build_laplacian_1d(&g)).unwrap();
            assert!(eig.eigenvalues()[0].abs() < 1e-10);
            let v = eig.eigenvector(0);
            let c = 1.0 / (n as f64).sqrt();
            for x in v {
                assert!((x.abs() - c).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn single_well_peak() {
        let g = Grid1D::new(10.0, 100).unwrap();
        let kp = KronigPenneyParams {
            well_depth: 2.0,
            width: 0.5,
            centers: vec![g.x(30)],
        };
        let v = sample_kp_potential(&g, &kp).unwrap();
        assert_eq!(v[30], -2.0);
        assert!(v.iter().all(|&x| (-2.0..=0.0).contains(&x)));
    }

    #[test]
    fn zero_depth_is_free() {
        let g = Grid1D::new(20.0, 40).unwrap();
        let kp = KronigPenneyParams::evenly_spaced(20.0, 0.0, 1.0, 3);
        assert!(sample_kp_potential(&g, &kp).unwrap().iter().all(|&x| x == 0.0));
        assert_eq!(build_kronig_penney(&g, &kp).unwrap(), build_laplacian_1d(&g));
    }

    #[test]
    fn default_midpoint_value() {
        // Halfway between wells 1 and 2 on the default layout; the two nearest
        // tails dominate.
        let g = Grid1D::new(100.0, 2200).unwrap();
        let kp = KronigPenneyParams::defaults(100.0);
        assert_eq!(kp.wells(), 10);
        let v = sample_kp_potential(&g, &kp).unwrap();
        // x = 150/11 sits on grid point 300 of a 2200-point grid
        let mid = v[300];
        let two_tails = -2.0 * (-(50.0_f64 / 11.0 / 3.0).powi(2)).exp();
        assert!((mid - two_tails).abs() < 0.01, "{mid} vs {two_tails}");
        assert!((mid + 0.2).abs() < 0.01);
    }

    #[test]
    fn diagonal_is_kinetic_plus_potential() {
        let g = Grid1D::new(100.0, 64).unwrap();
        let kp = KronigPenneyParams::defaults(100.0);
        let v = sample_kp_potential(&g, &kp).unwrap();
        let h = build_kronig_penney(&g, &kp).unwrap();
        let h2 = g.spacing() * g.spacing();
        for (i, vi) in v.iter().enumerate() {
            assert_eq!(h[(i, i)], 1.0 / h2 + vi);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = Grid1D::new(10.0, 16).unwrap();
        let mut kp = KronigPenneyParams::evenly_spaced(10.0, 1.0, 1.0, 2);
        kp.width = 0.0;
        assert!(matches!(
            kp.validate(&g),
            Err(HamiltonianError::Invalid { field: "width", .. })
        ));
        kp.width = 1.0;
        kp.centers.push(10.0);
        assert!(matches!(
            kp.validate(&g),
            Err(HamiltonianError::Invalid { field: "centers", .. })
        ));
        kp.centers.clear();
        assert!(kp.validate(&g).is_err());
        let kp = KronigPenneyParams::evenly_spaced(10.0, -1.0, 1.0, 2);
        assert!(matches!(
            kp.validate(&g),
            Err(HamiltonianError::Invalid { field: "well_depth", .. })
        ));
    }
}
