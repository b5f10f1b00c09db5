//! Sparse representations of the low-lying eigenspace of a real symmetric
//! matrix `H`.
//!
//! The density matrix of the `N` lowest states is approximated by the
//! minimizer of the convex problem
//!
//! ```text
//! min_P  tr(HP) + ||P||_1 / μ    s.t.  P = Pᵀ,  tr P = N,  0 ⪯ P ⪯ I
//! ```
//!
//! solved with a three-block split Bregman (ADMM) iteration. Larger `μ`
//! weakens the entrywise ℓ1 penalty and brings `P` closer to the exact
//! spectral projector; smaller `μ` yields sparser, more localized `P`.
//!
//! Modules:
//! - [`linalg`]: dense symmetric matrices, eigensolver and proximal kernels
//! - [`hamiltonian`]: periodic 1D finite-difference Hamiltonians
//! - [`solver`]: the splitting iteration and its convergence loop
//! - [`diagnostics`]: exact projector, occupation spectra and error measures
//! - [`cli`]: configuration files and the batch commands behind the binary

pub mod cli;
pub mod diagnostics;
pub mod hamiltonian;
pub mod linalg;
pub mod solver;

pub use linalg::{DenseSymMatrix, SpectralDecomposition};
pub use solver::{solve, SolverParams, SolverResult, SolverState};
