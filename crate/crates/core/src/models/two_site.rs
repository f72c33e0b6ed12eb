use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::{ModelPair, SiteMap, Topology};
use crate::numkit::SparseOperator;

/// The minimal coalescence model: H0 = ε₀·I on two sites and a single
/// one-way hop Hp = κ·|1⟩⟨2|. For κ ≠ 0 the doubly degenerate level at ε₀
/// keeps only one eigenvector.
pub fn build_two_site(kappa: Complex64, eps0: f64) -> Result<ModelPair, CoreError> {
    if !eps0.is_finite() {
        return Err(CoreError::InvalidSpec("two-site onsite energy must be finite".into()));
    }
    let site_map = Arc::new(SiteMap::chain(2, Topology::Dot));
    let mut h0 = SparseOperator::new(2)?;
    if eps0 != 0.0 {
        let e = Complex64::new(eps0, 0.0);
        h0.push(0, 0, e)?;
        h0.push(1, 1, e)?;
    }
    let mut hp = SparseOperator::new(2)?;
    if kappa != Complex64::new(0.0, 0.0) {
        hp.push(0, 1, kappa)?;
    }
    Ok(ModelPair { h0, hp, site_map, warnings: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{eig_full, numerical_rank};

    #[test]
    fn matrix_form_and_multiplicities() {
        let model = build_two_site(Complex64::new(0.5, 0.0), 0.0).unwrap();
        let h = model.total_dense();
        assert_eq!(h[(0, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(h[(0, 1)], Complex64::new(0.5, 0.0));
        assert_eq!(h[(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(h[(1, 1)], Complex64::new(0.0, 0.0));

        let es = eig_full(&h).unwrap();
        assert!(es.eigenvalues.iter().all(|z| z.norm() < 1e-14));
        assert_eq!(numerical_rank(&es.right_vectors, 1e-6).unwrap(), 1);

        let dp = build_two_site(Complex64::new(0.0, 0.0), 0.3).unwrap();
        let es0 = eig_full(&dp.total_dense()).unwrap();
        assert!(es0.eigenvalues.iter().all(|z| (z - Complex64::new(0.3, 0.0)).norm() < 1e-14));
        assert_eq!(numerical_rank(&es0.right_vectors, 1e-6).unwrap(), 2);
    }
}
