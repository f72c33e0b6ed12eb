use std::sync::Arc;

use crate::numkit::{ComplexMatrix, SparseOperator};

use crate::models::SiteMap;

/// A Hamiltonian split into its Hermitian part `H0` and non-Hermitian part
/// `Hp`, sharing one site map. `H0` is Hermitian exactly — every builder adds
/// bond entries in conjugate pairs, so no floating-point symmetrization is
/// ever needed.
#[derive(Debug, Clone)]
pub struct ModelPair {
    pub h0: SparseOperator,
    pub hp: SparseOperator,
    pub site_map: Arc<SiteMap>,
    /// Non-fatal observations recorded at build time (degenerate parameter
    /// edges and the like).
    pub warnings: Vec<String>,
}

impl ModelPair {
    pub fn dim(&self) -> usize {
        self.site_map.dim()
    }

    pub fn h0_dense(&self) -> ComplexMatrix {
        self.h0.to_dense()
    }

    pub fn hp_dense(&self) -> ComplexMatrix {
        self.hp.to_dense()
    }

    /// Dense `H0 + Hp`.
    pub fn total_dense(&self) -> ComplexMatrix {
        let mut m = self.h0.to_dense();
        for &(r, c, a) in self.hp.triplets() {
            m[(r, c)] += a;
        }
        m
    }

    /// Sparse `H0 + Hp` (triplets concatenated, `H0` first).
    pub fn total_sparse(&self) -> SparseOperator {
        let mut op = SparseOperator::new(self.dim()).expect("dim >= 1 by construction");
        for &(r, c, a) in self.h0.triplets() {
            op.push(r, c, a).expect("indices already validated");
        }
        for &(r, c, a) in self.hp.triplets() {
            op.push(r, c, a).expect("indices already validated");
        }
        op
    }
}
