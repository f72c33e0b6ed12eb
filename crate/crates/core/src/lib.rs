//! Construction and analysis of non-Hermitian tight-binding lattice models.
//!
//! The crate is organized as a stack:
//!
//! * [`numkit`] — dense complex eigendecomposition (right *and* left
//!   eigenvectors), singular values / numerical rank, sparse application,
//!   and a dense matrix exponential. Everything else sits on top of this.
//! * [`models`] — builders for a family of lattice Hamiltonians, each split
//!   into a Hermitian part and a (possibly empty) non-Hermitian part, plus
//!   closed-form special states (degenerate ring pairs, dimerized-chain edge
//!   modes, cylinder edge modes).
//! * [`spectra`] — eigenvalue clustering and per-cluster classification into
//!   simple / degenerate (full eigenvector set) / coalescent (defective)
//!   levels, with biorthogonal diagnostics and parameter sweeps.
//! * [`theorem`] — mechanical verification that a unidirectional hop placed
//!   at nodal points of a degenerate pair converts the degeneracy into a
//!   coalescence, on any user-supplied `(H0, H', A, B, E)` quadruple.
//! * [`dynamics`] — non-unitary time evolution, snapshot extraction and
//!   fidelity curves, including the exact two-site propagator.

pub mod dynamics;
pub mod error;
pub mod models;
pub mod numkit;
pub mod spectra;
pub mod theorem;

pub use error::CoreError;
