#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use sparse_dm::linalg::{sym_eig, DenseSymMatrix};
use sparse_dm::solver::SolverState;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> DenseSymMatrix {
    let data: Vec<f64> = (0..n * n).map(|_| scale * rng.gen_range(-1.0..1.0)).collect();
    DenseSymMatrix::symmetrized(n, data)
}

/// Random orthonormal basis, one vector per entry.
pub fn random_orthonormal(rng: &mut impl Rng, n: usize) -> Vec<Vec<f64>> {
    // Modified Gram-Schmidt on Gaussian-ish vectors; independent of the
    // library eigensolver.
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    while basis.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for _ in 0..2 {
            for u in &basis {
                let dot: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= dot * y;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-6 {
            basis.push(v.into_iter().map(|x| x / norm).collect());
        }
    }
    basis
}

pub fn from_eigenpairs(values: &[f64], vectors: &[Vec<f64>]) -> DenseSymMatrix {
    let n = values.len();
    let mut data = vec![0.0; n * n];
    for (f, v) in values.iter().zip(vectors) {
        for a in 0..n {
            for b in 0..n {
                data[a * n + b] += f * v[a] * v[b];
            }
        }
    }
    DenseSymMatrix::symmetrized(n, data)
}

/// Occupations in [0, 1] summing to `n_electrons`.
pub fn random_occupations(rng: &mut impl Rng, n: usize, n_electrons: f64) -> Vec<f64> {
    let base = n_electrons / n as f64;
    let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mean = u.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = u.iter().map(|x| x - mean).collect();
    // largest step keeping base + t·dev inside [0, 1]
    let mut t_max = f64::INFINITY;
    for &x in &dev {
        if x > 0.0 {
            t_max = t_max.min((1.0 - base) / x);
        } else if x < 0.0 {
            t_max = t_max.min(base / -x);
        }
    }
    let t = if t_max.is_finite() { t_max * rng.gen_range(0.0..1.0) } else { 0.0 };
    dev.iter().map(|x| base + t * x).collect()
}

/// Random member of `{P = Pᵀ, tr P = N, 0 ⪯ P ⪯ I}`.
pub fn random_feasible(rng: &mut impl Rng, n: usize, n_electrons: f64) -> DenseSymMatrix {
    let f = random_occupations(rng, n, n_electrons);
    let v = random_orthonormal(rng, n);
    // trace may drift by rounding; pin it exactly
    let p = from_eigenpairs(&f, &v);
    let shift = (p.trace() - n_electrons) / n as f64;
    p.shift_diagonal(-shift)
}

/// Cyclic Jacobi eigenvalues, ascending. Reference oracle for small n.
pub fn jacobi_eigenvalues(a: &DenseSymMatrix) -> Vec<f64> {
    let n = a.dim();
    let mut m: Vec<f64> = a.as_slice().to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i * n + j] * m[i * n + j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

pub fn reconstruction_residual(a: &DenseSymMatrix) -> (f64, f64) {
    let eig = sym_eig(a).unwrap();
    let n = a.dim();
    let recon = eig.reconstruct_with(|l| l);
    let mut orth = 0.0;
    for i in 0..n {
        for j in 0..n {
            let dot: f64 = eig
                .eigenvector(i)
                .iter()
                .zip(eig.eigenvector(j))
                .map(|(x, y)| x * y)
                .sum();
            let t = if i == j { 1.0 } else { 0.0 };
            orth += (dot - t) * (dot - t);
        }
    }
    (a.distance(&recon).unwrap(), orth.sqrt())
}

pub fn example2_h() -> DenseSymMatrix {
    DenseSymMatrix::from_rows(&[
        vec![1.0, 0.0, 0.0],
        vec![0.0, 2.0, 2.0],
        vec![0.0, 2.0, 2.0],
    ])
    .unwrap()
}

pub fn example2_p0() -> DenseSymMatrix {
    DenseSymMatrix::from_rows(&[
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.5, -0.5],
        vec![0.0, -0.5, 0.5],
    ])
    .unwrap()
}

pub fn example2_p1() -> DenseSymMatrix {
    DenseSymMatrix::from_diagonal(&[1.0, 0.0, 0.0])
}

/// Fixed point of the iteration on Example 2 with λ = r = μ = 1.
pub fn example2_saddle() -> SolverState {
    let p = example2_p1();
    SolverState {
        q: p.clone(),
        r: p.clone(),
        b: DenseSymMatrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, -1.0],
            vec![0.0, -1.0, 1.0],
        ])
        .unwrap(),
        d: DenseSymMatrix::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, -1.0, -1.0],
            vec![0.0, -1.0, -1.0],
        ])
        .unwrap(),
        p,
        iteration: 0,
    }
}

/// Random symmetric matrix with eigenvalue gap `λ_{N+1} − λ_N ≥ gap`.
pub fn random_gapped(rng: &mut impl Rng, n: usize, n_occ: usize, gap: f64) -> DenseSymMatrix {
    let mut ev: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lift = (gap - (ev[n_occ] - ev[n_occ - 1])).max(0.0);
    for e in ev.iter_mut().skip(n_occ) {
        *e += lift;
    }
    let v = random_orthonormal(rng, n);
    from_eigenpairs(&ev, &v)
}
