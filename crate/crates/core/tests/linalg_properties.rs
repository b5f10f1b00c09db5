mod common;

use proptest::prelude::*;
use sparse_dm::linalg::{
    io, soft_threshold, spectral_clamp, sym_eig, trace_shift_project, DenseSymMatrix,
};

fn sym_matrix(max_n: usize) -> impl Strategy<Value = DenseSymMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-10.0..10.0f64, n * n)
            .prop_map(move |data| DenseSymMatrix::symmetrized(n, data))
    })
}

fn sym_pair(max_n: usize) -> impl Strategy<Value = (DenseSymMatrix, DenseSymMatrix)> {
    (2..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(-5.0..5.0f64, n * n),
            prop::collection::vec(-5.0..5.0f64, n * n),
        )
            .prop_map(move |(a, b)| {
                (
                    DenseSymMatrix::symmetrized(n, a),
                    DenseSymMatrix::symmetrized(n, b),
                )
            })
    })
}

fn is_exactly_symmetric(m: &DenseSymMatrix) -> bool {
    let n = m.dim();
    (0..n).all(|i| (0..n).all(|j| m[(i, j)].to_bits() == m[(j, i)].to_bits()))
}

#[test]
fn eigenvalues_match_jacobi_oracle_small_n() {
    let mut rng = common::rng(11);
    for n in 1..=4 {
        for _ in 0..200 {
            let a = common::random_symmetric(&mut rng, n, 3.0);
            let ours = sym_eig(&a).unwrap();
            let oracle = common::jacobi_eigenvalues(&a);
            for (x, y) in ours.eigenvalues().iter().zip(&oracle) {
                assert!((x - y).abs() < 1e-12 * (1.0 + y.abs()), "n={n}: {x} vs {y}");
            }
        }
    }
}

#[test]
fn random_8x8_reconstruction() {
    let mut rng = common::rng(8);
    let a = common::random_symmetric(&mut rng, 8, 1.0);
    let (recon, orth) = common::reconstruction_residual(&a);
    assert!(recon <= 8.0 * 1e-10 * a.frobenius_norm());
    assert!(orth <= 8.0 * 1e-10);
    let oracle = common::jacobi_eigenvalues(&a);
    let ours = sym_eig(&a).unwrap();
    for (x, y) in ours.eigenvalues().iter().zip(&oracle) {
        assert!((x - y).abs() < 1e-11);
    }
}

#[test]
fn graded_and_clustered_spectra() {
    let mut rng = common::rng(3);
    for n in [5, 17, 40] {
        let v = common::random_orthonormal(&mut rng, n);
        let graded: Vec<f64> = (0..n).map(|i| 10f64.powi(i as i32 % 12 - 6)).collect();
        let clustered: Vec<f64> = (0..n).map(|i| 1.0 + 1e-13 * i as f64).collect();
        for ev in [graded, clustered] {
            let a = common::from_eigenpairs(&ev, &v);
            let (recon, orth) = common::reconstruction_residual(&a);
            let nf = n as f64;
            assert!(recon <= nf * 1e-10 * a.frobenius_norm().max(1.0));
            assert!(orth <= nf * 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eig_reconstruction_and_orthonormality(a in sym_matrix(64)) {
        let n = a.dim() as f64;
        let eig = sym_eig(&a).unwrap();
        prop_assert!(eig.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
        let (recon, orth) = common::reconstruction_residual(&a);
        prop_assert!(orth <= n * 1e-10, "orthonormality {}", orth);
        prop_assert!(recon <= n * 1e-10 * a.frobenius_norm().max(1.0), "reconstruction {}", recon);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn soft_threshold_is_nonexpansive((a, b) in sym_pair(16), t in 0.0..4.0f64) {
        let sa = soft_threshold(&a, t);
        let sb = soft_threshold(&b, t);
        prop_assert!(sa.distance(&sb).unwrap() <= a.distance(&b).unwrap() + 1e-12);
        prop_assert!(is_exactly_symmetric(&sa));
    }

    #[test]
    fn trace_projection_is_closest((b, x) in sym_pair(16), target in 0.5..4.0f64) {
        let n = b.dim() as f64;
        let p = trace_shift_project(&b, target);
        prop_assert!((p.trace() - target).abs() <= n * 1e-12 * b.trace().abs().max(1.0));
        let x = x.shift_diagonal(-(x.trace() - target) / n);
        prop_assert!(b.distance(&p).unwrap() <= b.distance(&x).unwrap() + 1e-9);
        prop_assert!(is_exactly_symmetric(&p));
    }

    #[test]
    fn clamp_lands_in_the_box_and_is_idempotent(a in sym_matrix(24)) {
        let r = spectral_clamp(&a).unwrap();
        prop_assert!(is_exactly_symmetric(&r));
        let ev = sym_eig(&r).unwrap();
        prop_assert!(ev.eigenvalues()[0] >= -1e-9);
        prop_assert!(*ev.eigenvalues().last().unwrap() <= 1.0 + 1e-9);
        let rr = spectral_clamp(&r).unwrap();
        prop_assert!(rr.distance(&r).unwrap() <= 1e-9);
    }

    #[test]
    fn text_round_trip(a in sym_matrix(10)) {
        let back = io::parse_text(&io::to_text(&a)).unwrap();
        prop_assert!(a.as_slice().iter().zip(back.as_slice()).all(|(x, y)| x.to_bits() == y.to_bits()));
    }
}

#[test]
fn clamp_keeps_eigenvectors() {
    let mut rng = common::rng(5);
    let n = 6;
    let v = common::random_orthonormal(&mut rng, n);
    let ev = [-0.7, -0.1, 0.2, 0.6, 1.3, 2.0];
    let a = common::from_eigenpairs(&ev, &v);
    let clamped: Vec<f64> = ev.iter().map(|x| x.clamp(0.0, 1.0)).collect();
    let expected = common::from_eigenpairs(&clamped, &v);
    assert!(spectral_clamp(&a).unwrap().distance(&expected).unwrap() < 1e-12);
}

#[test]
fn matrix_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.mat");
    let mut rng = common::rng(2);
    let a = common::random_symmetric(&mut rng, 7, 1e3);
    io::write_matrix(&path, &a).unwrap();
    let back = io::read_matrix(&path).unwrap();
    assert_eq!(a, back);
    assert!(io::read_matrix(dir.path().join("missing.mat")).is_err());
}
