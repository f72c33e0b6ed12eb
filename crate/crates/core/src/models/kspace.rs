use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::ring::plane_wave;
use crate::models::{ModelPair, SiteMap, Topology};
use crate::numkit::{ComplexMatrix, SparseOperator};

/// Uniform ring of `n_sites` plus the non-Hermitian coupling that pairs every
/// degenerate momentum doublet:
///
///   Hp = κ · Σ_{k ∈ (0, π)} |k⟩⟨−k|,
///
/// built in the momentum basis and pushed to the site basis through the
/// discrete-Fourier change of basis. This is the normative construction; the
/// closed-form cotangent matrix below is a diagnostic only.
pub fn build_kspace_ring(n_sites: usize, kappa: Complex64) -> Result<ModelPair, CoreError> {
    if n_sites < 4 {
        return Err(CoreError::InvalidSpec(format!(
            "momentum-paired ring needs n_sites >= 4 (got {n_sites})"
        )));
    }
    let n = n_sites;
    let site_map = Arc::new(SiteMap::chain(n, Topology::Ring));
    let mut h0 = SparseOperator::new(n)?;
    let one = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let jp = (j + 1) % n;
        h0.push(j, jp, one)?;
        h0.push(jp, j, one)?;
    }

    let mut hp_dense = ComplexMatrix::zeros(n)?;
    for mode in 1..=(n - 1) / 2 {
        let k = 2.0 * PI * mode as f64 / n as f64;
        let kp = plane_wave(n, k, site_map.clone());
        let km = plane_wave(n, -k, site_map.clone());
        for i in 0..n {
            for j in 0..n {
                hp_dense[(i, j)] += kappa * kp.amplitudes[i] * km.amplitudes[j].conj();
            }
        }
    }
    let hp = SparseOperator::from_dense(&hp_dense);
    Ok(ModelPair { h0, hp, site_map, warnings: Vec::new() })
}

/// Closed-form site-basis expression of the momentum pairing, provided as a
/// diagnostic to compare against the normative DFT build. With m = (l + j)
/// mod n over 1-based sites l, j, the entry is κ·S/n where S = n/2 − 1 at
/// m = 0, S = −1 at even m, and S = i·cot(πm/n) at odd m.
pub fn kspace_cot_matrix(n_sites: usize, kappa: Complex64) -> Result<ComplexMatrix, CoreError> {
    if n_sites < 4 {
        return Err(CoreError::InvalidSpec(format!(
            "momentum-paired ring needs n_sites >= 4 (got {n_sites})"
        )));
    }
    let n = n_sites;
    let mut out = ComplexMatrix::zeros(n)?;
    for l in 1..=n {
        for j in 1..=n {
            let m = (l + j) % n;
            let s = if m == 0 {
                Complex64::new(n as f64 / 2.0 - 1.0, 0.0)
            } else if m % 2 == 0 {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(0.0, 1.0 / (PI * m as f64 / n as f64).tan())
            };
            out[(l - 1, j - 1)] = kappa * s / n as f64;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::apply;

    #[test]
    fn momentum_action_annihilates_positive_k_and_raises_negative_k() {
        let n = 12;
        let kappa = Complex64::new(1.0, 0.0);
        let model = build_kspace_ring(n, kappa).unwrap();
        for mode in 1..n / 2 {
            let k = 2.0 * PI * mode as f64 / n as f64;
            let kp = plane_wave(n, k, model.site_map.clone());
            let km = plane_wave(n, -k, model.site_map.clone());
            let on_kp = apply(&model.hp, &kp.amplitudes).unwrap();
            let r_kill: f64 = on_kp.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(r_kill < 1e-12, "Hp|k> should vanish, got {r_kill}");
            let on_km = apply(&model.hp, &km.amplitudes).unwrap();
            let r_map: f64 = on_km
                .iter()
                .zip(kp.amplitudes.iter())
                .map(|(a, b)| (a - kappa * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r_map < 1e-12, "Hp|-k> should equal kappa|k>, got {r_map}");
        }
    }

    #[test]
    fn cot_diagnostic_matches_the_dft_build() {
        let kappa = Complex64::new(1.0, 0.0);
        let model = build_kspace_ring(12, kappa).unwrap();
        let dft = model.hp_dense();
        let cot = kspace_cot_matrix(12, kappa).unwrap();
        let mut max_diff = 0.0f64;
        for i in 0..12 {
            for j in 0..12 {
                max_diff = max_diff.max((dft[(i, j)] - cot[(i, j)]).norm());
            }
        }
        assert!(max_diff < 1e-14, "diagnostic deviates by {max_diff}");
    }

    #[test]
    fn large_n_coupling_approaches_the_reciprocal_law() {
        // (1/n)·cot(Δπ/n) → 1/(πΔ) as n grows; Δ = 1, n = 200.
        let n = 200.0f64;
        let exact = (1.0 / n) / (PI / n).tan();
        let approx = 1.0 / PI;
        assert!((exact - approx).abs() / approx <= 2e-4);
    }

    #[test]
    fn rejects_tiny_rings() {
        assert!(build_kspace_ring(3, Complex64::new(1.0, 0.0)).is_err());
        assert!(kspace_cot_matrix(2, Complex64::new(1.0, 0.0)).is_err());
    }
}
