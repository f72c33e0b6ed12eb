use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::{ModelPair, SiteMap, StateVector, Topology};
use crate::numkit::SparseOperator;

/// Uniform periodic ring of 2·`n_half` sites with unit hopping; the spectrum
/// is {2cos(πn/n_half)}, doubly degenerate away from the band edges. `Hp`
/// starts empty.
pub fn build_ring(n_half: usize) -> Result<ModelPair, CoreError> {
    if n_half < 2 {
        return Err(CoreError::InvalidSpec(format!(
            "ring needs n_half >= 2 (got {n_half})"
        )));
    }
    let n = 2 * n_half;
    let site_map = Arc::new(SiteMap::chain(n, Topology::Ring));
    let mut h0 = SparseOperator::new(n)?;
    let one = Complex64::new(1.0, 0.0);
    for j in 0..n {
        let jp = (j + 1) % n;
        h0.push(j, jp, one)?;
        h0.push(jp, j, one)?;
    }
    let hp = SparseOperator::new(n)?;
    Ok(ModelPair { h0, hp, site_map, warnings: Vec::new() })
}

/// Add the single unidirectional hop κ·|l0⟩⟨l0+r| to a one-dimensional
/// model. Site indices are 1-based; on a ring, `l0 + r` wraps periodically,
/// while on an open chain it must stay within range.
pub fn attach_unidirectional(
    model: &ModelPair,
    l0: usize,
    r: usize,
    kappa: Complex64,
) -> Result<ModelPair, CoreError> {
    let n = model.dim();
    if l0 < 1 || l0 > n {
        return Err(CoreError::InvalidSpec(format!(
            "hop origin site {l0} outside 1..={n}"
        )));
    }
    if r < 1 {
        return Err(CoreError::InvalidSpec("hop span r must be >= 1".into()));
    }
    let row = l0 - 1;
    let col = match model.site_map.topology() {
        Topology::Ring => (l0 - 1 + r) % n,
        Topology::OpenChain => {
            let target = l0 + r;
            if target > n {
                return Err(CoreError::InvalidSpec(format!(
                    "hop target site {target} outside the open chain 1..={n}"
                )));
            }
            target - 1
        }
        other => {
            return Err(CoreError::InvalidSpec(format!(
                "unidirectional hop attachment expects a ring or open chain, got {other:?}"
            )));
        }
    };
    let mut out = model.clone();
    out.hp.push(row, col, kappa)?;
    Ok(out)
}

/// Plane wave on `n` sites with 1-based site phases: amplitude at site `s`
/// (1-based) is e^{iks}/√n.
pub fn plane_wave(n: usize, k: f64, site_map: Arc<SiteMap>) -> StateVector {
    let amps = (0..n)
        .map(|m| Complex64::from_polar(1.0, k * (m as f64 + 1.0)) / (n as f64).sqrt())
        .collect();
    StateVector { amplitudes: amps, site_map }
}

/// Reduce k to (−π, π].
fn wrap_k(k: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut out = k % two_pi;
    if out <= -PI {
        out += two_pi;
    } else if out > PI {
        out -= two_pi;
    }
    out
}

/// The symmetric/antisymmetric combinations of the degenerate plane-wave
/// pair at ±k on the 2·`n_half` ring:
///
///   |ψ_k^±⟩ = (|k⟩ ± e^{i2kl₀}|−k⟩)/√2.
///
/// `ψ⁻` always vanishes at site `l0`; `ψ⁺` vanishes at `l0 + r` exactly when
/// cos(kr) = 0. `k` must sit on the momentum grid πn/n_half and avoid the
/// non-degenerate band edges k ∈ {0, π}.
pub fn ring_pair_states(
    n_half: usize,
    k: f64,
    l0: usize,
) -> Result<(StateVector, StateVector), CoreError> {
    if n_half < 2 {
        return Err(CoreError::InvalidSpec(format!("ring needs n_half >= 2 (got {n_half})")));
    }
    if l0 < 1 {
        return Err(CoreError::InvalidSpec("site index l0 is 1-based".into()));
    }
    let kw = wrap_k(k);
    let step = PI / n_half as f64;
    let ratio = kw / step;
    if (ratio - ratio.round()).abs() > 1e-9 {
        return Err(CoreError::InvalidSpec(format!(
            "k = {k} is not on the momentum grid π·n/{n_half}"
        )));
    }
    if kw.abs() < 1e-12 || (kw.abs() - PI).abs() < 1e-12 {
        return Err(CoreError::InvalidSpec(
            "k in {0, π} has no degenerate partner on the ring".into(),
        ));
    }
    let n = 2 * n_half;
    let site_map = Arc::new(SiteMap::chain(n, Topology::Ring));
    let kp = plane_wave(n, kw, site_map.clone());
    let km = plane_wave(n, -kw, site_map.clone());
    let phase = Complex64::from_polar(1.0, 2.0 * kw * l0 as f64);
    let inv_sqrt2 = 1.0 / 2.0f64.sqrt();
    let mut plus = StateVector::zero(site_map.clone());
    let mut minus = StateVector::zero(site_map);
    for i in 0..n {
        let a = kp.amplitudes[i];
        let b = phase * km.amplitudes[i];
        plus.amplitudes[i] = (a + b) * inv_sqrt2;
        minus.amplitudes[i] = (a - b) * inv_sqrt2;
    }
    Ok((plus, minus))
}

/// Momenta at which cos(kr) = 0, i.e. k = (2m+1)π/(2r) restricted to
/// (0, π) — the spans where a unidirectional hop of range `r` finds a nodal
/// point of ψ⁺. Callers intersect with the finite-ring grid.
pub fn admissible_k(r: usize) -> Result<Vec<f64>, CoreError> {
    if r < 1 {
        return Err(CoreError::InvalidSpec("hop span r must be >= 1".into()));
    }
    Ok((0..r).map(|m| (2 * m + 1) as f64 * PI / (2.0 * r as f64)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{apply, eig_full};

    #[test]
    fn four_site_ring_eigenvalues() {
        let model = build_ring(2).unwrap();
        let es = eig_full(&model.h0_dense()).unwrap();
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (lam, want) in es.eigenvalues.iter().zip(expect.iter()) {
            assert!((lam.re - want).abs() < 1e-12 && lam.im.abs() < 1e-13);
        }
    }

    #[test]
    fn twelve_site_ring_has_five_degenerate_pairs() {
        let model = build_ring(6).unwrap();
        let es = eig_full(&model.h0_dense()).unwrap();
        let mut pairs = 0;
        let mut i = 0;
        while i < 12 {
            if i + 1 < 12 && (es.eigenvalues[i] - es.eigenvalues[i + 1]).norm() < 1e-9 {
                pairs += 1;
                i += 2;
            } else {
                i += 1;
            }
        }
        assert_eq!(pairs, 5);
    }

    #[test]
    fn every_site_has_two_unit_bonds() {
        for n_half in [2usize, 5, 9] {
            let model = build_ring(n_half).unwrap();
            let d = model.h0_dense();
            for i in 0..model.dim() {
                let row_sum: f64 = (0..model.dim()).map(|j| d[(i, j)].norm()).sum();
                assert!((row_sum - 2.0).abs() < 1e-15);
            }
            assert!(d.is_hermitian());
        }
    }

    #[test]
    fn hop_attachment_wraps_on_ring_and_errors_off_ring() {
        let model = build_ring(6).unwrap();
        let kappa = Complex64::new(0.5, 0.0);
        let with = attach_unidirectional(&model, 1, 1, kappa).unwrap();
        assert_eq!(with.hp.triplets(), &[(0usize, 1usize, kappa)]);
        // l0 = 2N with r = 1 wraps to site 1.
        let wrapped = attach_unidirectional(&model, 12, 1, kappa).unwrap();
        assert_eq!(wrapped.hp.triplets(), &[(11usize, 0usize, kappa)]);
        assert!(attach_unidirectional(&model, 13, 1, kappa).is_err());
        assert!(attach_unidirectional(&model, 1, 0, kappa).is_err());
        // κ = 0 keeps H = H0.
        let zero = attach_unidirectional(&model, 1, 1, Complex64::new(0.0, 0.0)).unwrap();
        assert_eq!(zero.total_dense(), model.h0_dense());
    }

    #[test]
    fn pair_states_have_the_advertised_nodes() {
        let k = PI / 2.0;
        let (plus, minus) = ring_pair_states(6, k, 1).unwrap();
        // ψ⁻ vanishes at l0 = 1 (index 0); ψ⁺ at l0 + 1 = 2 since cos(k·1) = 0.
        assert!(minus.amplitudes[0].norm() < 1e-15);
        assert!(plus.amplitudes[1].norm() < 1e-15);
        assert!((plus.norm() - 1.0).abs() < 1e-14);
        assert!((minus.norm() - 1.0).abs() < 1e-14);
        assert!(plus.overlap(&minus).unwrap().norm() < 1e-14);
    }

    #[test]
    fn pair_states_are_ring_eigenvectors() {
        let k = PI / 3.0;
        let model = build_ring(6).unwrap();
        let (plus, minus) = ring_pair_states(6, k, 2).unwrap();
        let e = 2.0 * k.cos();
        for s in [&plus, &minus] {
            let hv = apply(&model.h0, &s.amplitudes).unwrap();
            let r: f64 = hv
                .iter()
                .zip(s.amplitudes.iter())
                .map(|(a, b)| (a - e * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r < 1e-12, "residual {r}");
        }
    }

    #[test]
    fn pair_states_reject_off_grid_and_band_edges() {
        assert!(ring_pair_states(6, 0.1234, 1).is_err());
        assert!(ring_pair_states(6, 0.0, 1).is_err());
        assert!(ring_pair_states(6, PI, 1).is_err());
        assert!(ring_pair_states(6, PI / 2.0, 0).is_err());
    }

    #[test]
    fn admissible_momenta_for_small_spans() {
        assert_eq!(admissible_k(1).unwrap(), vec![PI / 2.0]);
        let k2 = admissible_k(2).unwrap();
        assert!((k2[0] - PI / 4.0).abs() < 1e-15);
        assert!((k2[1] - 3.0 * PI / 4.0).abs() < 1e-15);
        // r = 3 intersected with the n_half = 6 grid keeps all three values.
        let k3 = admissible_k(3).unwrap();
        let grid_step = PI / 6.0;
        for k in &k3 {
            let ratio = k / grid_step;
            assert!((ratio - ratio.round()).abs() < 1e-12);
        }
        assert_eq!(k3.len(), 3);
        assert!(admissible_k(0).is_err());
    }
}
