//! Dense complex linear algebra and sparse application.
//!
//! The eigensolver follows the classical dense route: unitary reduction to
//! upper Hessenberg form, implicitly shifted QR iteration to a triangular
//! Schur factor, then eigenvectors by protected triangular substitution.
//! Left eigenvectors are read off the adjoint triangular factor using the
//! same Schur basis, which pairs them with the right eigenvectors by
//! construction. Singular values come from a one-sided Jacobi sweep, which
//! keeps full precision on the tiny singular values that rank decisions and
//! coalescing-vector extraction depend on.

mod eig;
mod expm;
mod matrix;
mod sparse;
mod svd;

pub use eig::{eig_full, EigenSystem};
pub use expm::expm;
pub use matrix::ComplexMatrix;
pub use sparse::{apply, SparseOperator};
pub use svd::{numerical_rank, svd, Svd};
