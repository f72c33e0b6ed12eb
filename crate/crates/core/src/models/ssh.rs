use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::{ModelPair, SiteMap, StateVector, Topology};
use crate::numkit::SparseOperator;

pub(crate) fn validate_delta(delta: f64, warnings: &mut Vec<String>) -> Result<(), CoreError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(CoreError::InvalidSpec(format!(
            "dimerization delta must lie strictly inside (0, 1), got {delta}"
        )));
    }
    if delta < 1e-3 || delta > 1.0 - 1e-3 {
        warnings.push(format!(
            "delta = {delta} is near a degenerate edge: the edge-mode localization \
             ratio approaches {} and finite-size formulas lose contrast",
            if delta < 0.5 { "-1 (no localization)" } else { "0 (single-site modes)" }
        ));
    }
    Ok(())
}

/// Decay ratio per cell of the dimerized chain's edge modes.
pub fn ssh_rho(delta: f64) -> f64 {
    (delta - 1.0) / (delta + 1.0)
}

/// Open dimerized chain of 2·`n_cells` sites with bond amplitudes
/// (1/2)[1 + (−1)^l δ] between sites l and l+1 (1-based l), plus the single
/// unidirectional hop κ·|1⟩⟨2N| closing the two ends one way only.
pub fn build_ssh_chain(
    n_cells: usize,
    delta: f64,
    kappa: Complex64,
) -> Result<ModelPair, CoreError> {
    if n_cells < 2 {
        return Err(CoreError::InvalidSpec(format!(
            "dimerized chain needs n_cells >= 2 (got {n_cells})"
        )));
    }
    let mut warnings = Vec::new();
    validate_delta(delta, &mut warnings)?;
    let n = 2 * n_cells;
    let site_map = Arc::new(SiteMap::chain(n, Topology::OpenChain));
    let mut h0 = SparseOperator::new(n)?;
    for l in 1..n {
        let amp = Complex64::new(0.5 * (1.0 + (-1.0f64).powi(l as i32) * delta), 0.0);
        h0.push(l - 1, l, amp)?;
        h0.push(l, l - 1, amp)?;
    }
    let mut hp = SparseOperator::new(n)?;
    if kappa != Complex64::new(0.0, 0.0) {
        hp.push(0, n - 1, kappa)?;
    }
    Ok(ModelPair { h0, hp, site_map, warnings })
}

/// The left/right boundary modes of the open dimerized chain:
/// |L⟩ lives on odd sites 2j−1 with amplitude ρ^{j−1}/√Ω, |R⟩ on even sites
/// 2j with amplitude ρ^{N−j}/√Ω, where ρ = (δ−1)/(δ+1) and
/// Ω = (1−ρ^{2N})/(1−ρ²) normalizes both exactly.
pub fn ssh_edge_modes(n_cells: usize, delta: f64) -> Result<(StateVector, StateVector), CoreError> {
    if n_cells < 1 {
        return Err(CoreError::InvalidSpec("edge modes need n_cells >= 1".into()));
    }
    let mut warnings = Vec::new();
    validate_delta(delta, &mut warnings)?;
    let rho = ssh_rho(delta);
    let omega = (1.0 - rho.powi(2 * n_cells as i32)) / (1.0 - rho * rho);
    let inv = 1.0 / omega.sqrt();
    let n = 2 * n_cells;
    let site_map = Arc::new(SiteMap::chain(n, Topology::OpenChain));
    let mut left = StateVector::zero(site_map.clone());
    let mut right = StateVector::zero(site_map);
    for j in 1..=n_cells {
        left.amplitudes[2 * j - 2] = Complex64::new(rho.powi(j as i32 - 1) * inv, 0.0);
        right.amplitudes[2 * j - 1] = Complex64::new(rho.powi((n_cells - j) as i32) * inv, 0.0);
    }
    Ok((left, right))
}

/// Magnitude of the single boundary defect of `H0|L⟩`: the interior
/// amplitudes telescope away and only site 2N keeps ((1−δ)/2)·|ρ|^{N−1}/√Ω.
pub fn ssh_boundary_residual(n_cells: usize, delta: f64) -> f64 {
    let rho = ssh_rho(delta);
    let omega = (1.0 - rho.powi(2 * n_cells as i32)) / (1.0 - rho * rho);
    (1.0 - delta) / 2.0 * rho.abs().powi(n_cells as i32 - 1) / omega.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{apply, eig_full};

    #[test]
    fn bond_amplitudes_alternate_around_one_half() {
        let model = build_ssh_chain(3, 0.1, Complex64::new(0.0, 0.0)).unwrap();
        let d = model.h0_dense();
        // Bond l = 1 (sites 1-2): 0.45; bond l = 2 (sites 2-3): 0.55.
        assert!((d[(0, 1)].re - 0.45).abs() < 1e-15);
        assert!((d[(1, 2)].re - 0.55).abs() < 1e-15);
        assert!(d.is_hermitian());
    }

    #[test]
    fn near_zero_modes_split_exponentially_in_chain_length() {
        let delta = 0.3;
        let mut gaps = Vec::new();
        for n_cells in [6usize, 8, 10] {
            let model = build_ssh_chain(n_cells, delta, Complex64::new(0.0, 0.0)).unwrap();
            let es = eig_full(&model.h0_dense()).unwrap();
            let mut mags: Vec<f64> = es.eigenvalues.iter().map(|z| z.norm()).collect();
            mags.sort_by(f64::total_cmp);
            // The two smallest are the hybridized edge pair, split by ~|ρ|^N.
            gaps.push(mags[0] + mags[1]);
        }
        let rho = ssh_rho(delta).abs();
        let ratio1 = gaps[1] / gaps[0];
        let ratio2 = gaps[2] / gaps[1];
        let expect = rho.powi(2);
        assert!((ratio1 / expect - 1.0).abs() < 0.2, "ratio {ratio1} vs {expect}");
        assert!((ratio2 / expect - 1.0).abs() < 0.2, "ratio {ratio2} vs {expect}");
    }

    #[test]
    fn hop_respects_the_left_mode_node() {
        let model = build_ssh_chain(20, 0.1, Complex64::new(0.5, 0.0)).unwrap();
        let (left, right) = ssh_edge_modes(20, 0.1).unwrap();
        // |L⟩ has exactly zero amplitude on site 2N, so Hp|L⟩ = 0 exactly.
        let hp_l = apply(&model.hp, &left.amplitudes).unwrap();
        assert!(hp_l.iter().all(|z| z.norm() == 0.0));
        // |R⟩ has exactly zero amplitude on site 1, so Hp†|R⟩ = 0 exactly.
        assert_eq!(right.amplitudes[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn edge_modes_are_unit_norm_with_the_advertised_ratio() {
        let (left, right) = ssh_edge_modes(12, 0.1).unwrap();
        assert!((left.norm() - 1.0).abs() < 1e-14);
        assert!((right.norm() - 1.0).abs() < 1e-14);
        let rho = ssh_rho(0.1);
        assert!((rho + 9.0 / 11.0).abs() < 1e-15);
        let ratio = left.amplitudes[2].re / left.amplitudes[0].re;
        assert!((ratio - rho).abs() < 1e-14);
        // Disjoint sublattice support.
        assert!(left.overlap(&right).unwrap().norm() < 1e-16);
    }

    #[test]
    fn boundary_residual_matches_closed_form_across_sizes() {
        for &delta in &[0.1, 0.3, 0.5] {
            for n_cells in 4..=30 {
                let model = build_ssh_chain(n_cells, delta, Complex64::new(0.0, 0.0)).unwrap();
                let (left, _) = ssh_edge_modes(n_cells, delta).unwrap();
                let hv = apply(&model.h0, &left.amplitudes).unwrap();
                let measured: f64 = hv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                let formula = ssh_boundary_residual(n_cells, delta);
                assert!(
                    (measured - formula).abs() < 1e-12,
                    "n_cells={n_cells} delta={delta}: {measured} vs {formula}"
                );
                // The defect is concentrated on the last site only.
                let interior: f64 =
                    hv[..2 * n_cells - 1].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                assert!(interior < 1e-15);
            }
        }
    }

    #[test]
    fn delta_validation_and_warnings() {
        assert!(build_ssh_chain(4, 0.0, Complex64::new(0.0, 0.0)).is_err());
        assert!(build_ssh_chain(4, 1.0, Complex64::new(0.0, 0.0)).is_err());
        assert!(build_ssh_chain(4, -0.2, Complex64::new(0.0, 0.0)).is_err());
        assert!(build_ssh_chain(1, 0.5, Complex64::new(0.0, 0.0)).is_err());
        let near_edge = build_ssh_chain(4, 1e-6, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(near_edge.warnings.len(), 1);
        let healthy = build_ssh_chain(4, 0.5, Complex64::new(0.0, 0.0)).unwrap();
        assert!(healthy.warnings.is_empty());
    }
}
