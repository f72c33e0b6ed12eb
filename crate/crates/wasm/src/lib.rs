//! Browser bindings for the interactive demo page. Each export takes plain
//! numbers, runs the corresponding library operation, and returns one JSON
//! string — `{"error": "..."}` on invalid input instead of a panic — so the
//! page needs no binding-specific marshalling beyond `JSON.parse`.

use num_complex::Complex64;
use serde_json::json;
use wasm_bindgen::prelude::*;

use dp2ep_core::dynamics::{evolve, fidelity_series, PropagationConfig};
use dp2ep_core::models::{ladder_bloch, ssh_edge_modes, ModelSpec, StateVector, Truncation};
use dp2ep_core::spectra::{classify, DEFAULT_TOL_CLUSTER, DEFAULT_TOL_RANK};
use dp2ep_core::CoreError;

fn err_json(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Spectrum of the 2·`n_half`-site ring with one unidirectional hop of
/// strength `kappa` spanning `r` bonds from site `l0` (1-based). Returns the
/// clustered eigenvalues with multiplicities, phase rigidity and class.
#[wasm_bindgen]
pub fn ring_spectrum(n_half: u32, l0: u32, r: u32, kappa_re: f64, kappa_im: f64) -> String {
    ring_spectrum_impl(n_half, l0, r, kappa_re, kappa_im).unwrap_or_else(err_json)
}

fn ring_spectrum_impl(
    n_half: u32,
    l0: u32,
    r: u32,
    kappa_re: f64,
    kappa_im: f64,
) -> Result<String, CoreError> {
    if n_half > 64 {
        return Err(CoreError::InvalidSpec("keep n_half <= 64 for the demo".into()));
    }
    let spec = ModelSpec::RingWithHop {
        n_half: n_half as usize,
        l0: l0 as usize,
        r: r as usize,
        kappa: Complex64::new(kappa_re, kappa_im).into(),
    };
    let pair = spec.build()?;
    let report = classify(&pair.total_dense(), DEFAULT_TOL_CLUSTER, DEFAULT_TOL_RANK)?;
    let clusters: Vec<_> = report
        .clusters
        .iter()
        .map(|c| {
            json!({
                "re": c.representative.re,
                "im": c.representative.im,
                "alg": c.algebraic_multiplicity,
                "geo": c.geometric_multiplicity,
                "phase_rigidity": c.min_phase_rigidity,
                "class": c.class.as_str(),
            })
        })
        .collect();
    Ok(json!({ "dim": pair.dim(), "clusters": clusters }).to_string())
}

/// Analytic two-band ladder dispersion on a momentum grid that avoids the
/// series discontinuities at k ∈ {0, π}. `n_max = 0` means the closed-form
/// infinite-range limit. Returns per-k band energies, the gap, and its
/// minimum over the grid.
#[wasm_bindgen]
pub fn ladder_gap(j_coupling: f64, n_max: u32, k_count: u32) -> String {
    ladder_gap_impl(j_coupling, n_max, k_count).unwrap_or_else(err_json)
}

fn ladder_gap_impl(j_coupling: f64, n_max: u32, k_count: u32) -> Result<String, CoreError> {
    if !(2..=2048).contains(&k_count) {
        return Err(CoreError::InvalidSpec("k_count must be in 2..=2048".into()));
    }
    let truncation = if n_max == 0 {
        Truncation::Infinite
    } else {
        Truncation::Finite(n_max as usize)
    };
    let a = std::f64::consts::PI / 50.0;
    let b = std::f64::consts::PI - a;
    let step = (b - a) / (k_count as f64 - 1.0);
    let (mut ks, mut re_minus, mut im_minus, mut re_plus, mut im_plus, mut gaps) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let (mut min_gap, mut k_at_min) = (f64::INFINITY, a);
    for i in 0..k_count {
        let k = if i + 1 == k_count { b } else { a + i as f64 * step };
        let (_, eigs) = ladder_bloch(k, j_coupling, truncation)?;
        let gap = (eigs[1] - eigs[0]).norm();
        if gap < min_gap {
            min_gap = gap;
            k_at_min = k;
        }
        ks.push(k);
        re_minus.push(eigs[0].re);
        im_minus.push(eigs[0].im);
        re_plus.push(eigs[1].re);
        im_plus.push(eigs[1].im);
        gaps.push(gap);
    }
    Ok(json!({
        "k": ks,
        "re_minus": re_minus,
        "im_minus": im_minus,
        "re_plus": re_plus,
        "im_plus": im_plus,
        "gap": gaps,
        "min_gap": min_gap,
        "k_at_min_gap": k_at_min,
    })
    .to_string())
}

/// Corner-to-corner transfer on the dimerized chain: start in the last site,
/// let the unidirectional corner hop funnel the state, and record the
/// fidelity against the left edge mode on `samples` evenly spaced times up
/// to `t_max`.
#[wasm_bindgen]
pub fn ssh_edge_fidelity(
    n_cells: u32,
    delta: f64,
    kappa_re: f64,
    kappa_im: f64,
    t_max: f64,
    samples: u32,
) -> String {
    ssh_edge_fidelity_impl(n_cells, delta, kappa_re, kappa_im, t_max, samples)
        .unwrap_or_else(err_json)
}

fn ssh_edge_fidelity_impl(
    n_cells: u32,
    delta: f64,
    kappa_re: f64,
    kappa_im: f64,
    t_max: f64,
    samples: u32,
) -> Result<String, CoreError> {
    if n_cells > 100 {
        return Err(CoreError::InvalidSpec("keep n_cells <= 100 for the demo".into()));
    }
    if !(2..=2048).contains(&samples) {
        return Err(CoreError::InvalidSpec("samples must be in 2..=2048".into()));
    }
    if !(t_max > 0.0 && t_max <= 1000.0) {
        return Err(CoreError::InvalidSpec("t_max must be in (0, 1000]".into()));
    }
    let spec = ModelSpec::SshChain {
        n_cells: n_cells as usize,
        delta,
        kappa: Complex64::new(kappa_re, kappa_im).into(),
    };
    let pair = spec.build()?;
    let psi0 = StateVector::basis_site(pair.site_map.clone(), 1, 2 * n_cells as usize)?;
    let (target, _) = ssh_edge_modes(n_cells as usize, delta)?;
    let times: Vec<f64> =
        (0..samples).map(|i| i as f64 * t_max / (samples as f64 - 1.0)).collect();
    let trace = evolve(&pair, &psi0, &times, &PropagationConfig::default())?;
    let series = fidelity_series(&trace, &target)?;
    let (t, f): (Vec<f64>, Vec<f64>) = series.into_iter().unzip();
    Ok(json!({ "t": t, "fidelity": f }).to_string())
}
