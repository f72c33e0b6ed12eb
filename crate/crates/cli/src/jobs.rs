//! Job execution: turn a validated [`JobConfig`] into CSV/JSON files on
//! disk. All outputs are staged and committed together, so a failing job
//! never leaves partial files behind.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde_json::{json, Value};

use dp2ep_core::dynamics::{
    evolve, fidelity_series, stripe_even_rows, stripe_initial_state, PropagationConfig,
};
use dp2ep_core::models::{
    admissible_k, cylinder_edge_modes, ladder_bloch, ring_pair_states, ssh_edge_modes, ssh_rho,
    ModelPair, ModelSpec, StateVector, Truncation,
};
use dp2ep_core::numkit::SparseOperator;
use dp2ep_core::spectra::{classify, ep_scan, ladder_gap_closing};
use dp2ep_core::theorem::check_transition;
use dp2ep_core::CoreError;

use crate::config::{JobConfig, JobSpec, StateSelector, TargetSelector};
use crate::output::{fmt_complex, fmt_f64, tool_version, StagedOutputs};

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// A κ sweep entry that could not be classified (the rest of the scan still
/// completes).
#[derive(Debug)]
pub struct RowError {
    pub kappa: Complex64,
    pub message: String,
}

#[derive(Debug)]
pub struct JobOutcome {
    /// Final paths of every file written, in staging order.
    pub written: Vec<PathBuf>,
    pub row_errors: Vec<RowError>,
}

fn resolve(out_dir: &Path, relative: &str) -> PathBuf {
    let p = Path::new(relative);
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        out_dir.join(p)
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn config_echo(config: &JobConfig) -> Value {
    serde_json::to_value(config).expect("a parsed config always serializes")
}

fn pretty(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json values always serialize");
    text.push('\n');
    text
}

pub fn execute(config: &JobConfig, out_dir: &Path) -> Result<JobOutcome, JobError> {
    let mut staged = StagedOutputs::new();
    let mut row_errors = Vec::new();

    match &config.job {
        JobSpec::Spectrum { tol_cluster, tol_rank, output } => {
            let pair = config.model.build()?;
            let report = classify(&pair.total_dense(), *tol_cluster, *tol_rank)?;
            let mut csv =
                String::from("cluster_id,re_lambda,im_lambda,alg_mult,geo_mult,phase_rigidity,class\n");
            for (id, c) in report.clusters.iter().enumerate() {
                csv.push_str(&format!(
                    "{id},{},{},{},{},{},{}\n",
                    fmt_f64(c.representative.re),
                    fmt_f64(c.representative.im),
                    c.algebraic_multiplicity,
                    c.geometric_multiplicity,
                    fmt_f64(c.min_phase_rigidity),
                    c.class.as_str(),
                ));
            }
            staged.stage(&resolve(out_dir, output), &csv)?;
        }

        JobSpec::EpScan { kappa_values, output } => {
            let kappas: Vec<Complex64> = kappa_values.iter().map(|p| p.value()).collect();
            let rows = ep_scan(&config.model, &kappas)?;
            let mut csv = String::from(
                "kappa,cluster_id,re_lambda,im_lambda,alg_mult,geo_mult,phase_rigidity,class\n",
            );
            for (kappa, row) in &rows {
                match row {
                    Ok(clusters) => {
                        for c in clusters {
                            csv.push_str(&format!(
                                "{},{},{},{},{},{},{},{}\n",
                                fmt_complex(*kappa),
                                c.id,
                                fmt_f64(c.representative.re),
                                fmt_f64(c.representative.im),
                                c.algebraic_multiplicity,
                                c.geometric_multiplicity,
                                fmt_f64(c.min_phase_rigidity),
                                c.class.as_str(),
                            ));
                        }
                    }
                    Err(e) => {
                        row_errors.push(RowError { kappa: *kappa, message: e.to_string() })
                    }
                }
            }
            staged.stage(&resolve(out_dir, output), &csv)?;
        }

        JobSpec::TheoremCheck { tol, k_index, output } => {
            let (h0, hp, a, b, e, scale, momentum) =
                theorem_quadruple(&config.model, *k_index)?;
            let report = check_transition(&h0, &hp, &a, &b, e, *tol, scale)?;
            let doc = json!({
                "version": tool_version(),
                "config": config_echo(config),
                "report": {
                    "residual_h0a": report.residual_h0a,
                    "residual_h0b": report.residual_h0b,
                    "residual_hpa": report.residual_hpa,
                    "residual_hpdb": report.residual_hpdb,
                    "overlap_ab": complex_json(report.overlap_ab),
                    "energy": complex_json(report.energy),
                    "momentum": momentum,
                    "verdict": report.verdict.as_str(),
                    "asymptotic_scale": report.asymptotic_scale,
                    "conclusion": report.conclusion.as_ref().map(|c| json!({
                        "cluster_energy": complex_json(c.cluster_energy),
                        "algebraic_multiplicity": c.algebraic_multiplicity,
                        "geometric_multiplicity": c.geometric_multiplicity,
                        "coalescing_overlap": c.coalescing_overlap,
                    })),
                },
            });
            staged.stage(&resolve(out_dir, output), &pretty(&doc))?;
        }

        JobSpec::Evolve {
            times,
            dt,
            method,
            renormalize_internally,
            initial_state: initial_sel,
            fidelity_target,
            fidelity_grid_dt,
            snapshots_output,
            fidelity_output,
        } => {
            let pair = config.model.build()?;
            let psi0 = initial_state(&config.model, &pair, initial_sel)?;
            let target = fidelity_target
                .as_ref()
                .map(|sel| target_state(&config.model, &pair, sel, &psi0))
                .transpose()?;

            // Snapshot times plus (when requested) the uniform fidelity grid.
            let mut all_times = times.clone();
            if target.is_some() {
                if let Some(grid_dt) = fidelity_grid_dt {
                    let t_max = *times.last().expect("times validated nonempty");
                    let mut k = 0u64;
                    loop {
                        let t = k as f64 * grid_dt;
                        if t > t_max {
                            break;
                        }
                        all_times.push(t);
                        k += 1;
                    }
                }
            }
            all_times.sort_by(|x, y| x.total_cmp(y));
            all_times.dedup();

            let cfg = PropagationConfig {
                dt: *dt,
                method: *method,
                renormalize_internally: *renormalize_internally,
            };
            let trace = evolve(&pair, &psi0, &all_times, &cfg)?;

            let mut snap = String::from("t,row,col,probability\n");
            for &t in times {
                let idx = trace
                    .times
                    .iter()
                    .position(|&u| u == t)
                    .expect("every requested time is in the union grid");
                for (site, &p) in trace.distributions[idx].iter().enumerate() {
                    let label = trace.site_map.label(site);
                    snap.push_str(&format!(
                        "{},{},{},{}\n",
                        fmt_f64(t),
                        label.row,
                        label.col,
                        fmt_f64(p),
                    ));
                }
            }
            staged.stage(&resolve(out_dir, snapshots_output), &snap)?;

            if let Some(target) = &target {
                let series = fidelity_series(&trace, target)?;
                let mut csv = String::from("t,F\n");
                for (t, f) in series {
                    csv.push_str(&format!("{},{}\n", fmt_f64(t), fmt_f64(f)));
                }
                let path = fidelity_output
                    .as_deref()
                    .expect("validated: fidelity_output accompanies fidelity_target");
                staged.stage(&resolve(out_dir, path), &csv)?;
            }
        }

        JobSpec::LadderAnalytic { n_max, k_count, output, summary_output } => {
            let (j_coupling, model_n_max) = match config.model {
                ModelSpec::Ladder { j, n_max, .. } => (j, n_max),
                ref other => {
                    return Err(CoreError::InvalidSpec(format!(
                        "dispersion tabulation requires a ladder model, got {}",
                        other.family_name()
                    ))
                    .into())
                }
            };
            let truncation = match n_max {
                Some(param) => param.to_truncation().ok_or_else(|| {
                    CoreError::InvalidSpec(
                        "truncation must be a positive integer or \"infinite\"".into(),
                    )
                })?,
                None => Truncation::Finite(model_n_max),
            };
            // The dispersion series is discontinuous at k ∈ {0, ±π}; keep the
            // grid π/50 clear of both ends (the gap scan enforces this too).
            let a = PI / 50.0;
            let b = PI - PI / 50.0;
            let step = (b - a) / (*k_count as f64 - 1.0);
            let grid: Vec<f64> = (0..*k_count)
                .map(|i| if i + 1 == *k_count { b } else { a + i as f64 * step })
                .collect();

            let mut csv =
                String::from("k,re_eps_minus,im_eps_minus,re_eps_plus,im_eps_plus,gap\n");
            for &k in &grid {
                let (_, eigs) = ladder_bloch(k, j_coupling, truncation)?;
                let gap = (eigs[1] - eigs[0]).norm();
                csv.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_f64(k),
                    fmt_f64(eigs[0].re),
                    fmt_f64(eigs[0].im),
                    fmt_f64(eigs[1].re),
                    fmt_f64(eigs[1].im),
                    fmt_f64(gap),
                ));
            }
            staged.stage(&resolve(out_dir, output), &csv)?;

            if let Some(summary_path) = summary_output {
                let (min_gap, k_at_min) = ladder_gap_closing(j_coupling, truncation, &grid)?;
                let doc = json!({
                    "version": tool_version(),
                    "config": config_echo(config),
                    "summary": {
                        "min_gap": min_gap,
                        "k_at_min_gap": k_at_min,
                        "truncation": match truncation {
                            Truncation::Infinite => json!("infinite"),
                            Truncation::Finite(n) => json!(n),
                        },
                    },
                });
                staged.stage(&resolve(out_dir, summary_path), &pretty(&doc))?;
            }
        }
    }

    let written = staged.commit()?;
    Ok(JobOutcome { written, row_errors })
}

/// The verification quadruple (H0, H′, A, B, E) each family defines, plus
/// the finite-size residual scale where one applies and the momentum used
/// (ring families only).
#[allow(clippy::type_complexity)]
fn theorem_quadruple(
    spec: &ModelSpec,
    k_index: Option<usize>,
) -> Result<
    (SparseOperator, SparseOperator, StateVector, StateVector, Complex64, Option<f64>, Option<f64>),
    CoreError,
> {
    match *spec {
        ModelSpec::RingWithHop { n_half, l0, r, .. } => {
            let pair = spec.build()?;
            let ks = admissible_k(r)?;
            let idx = k_index.unwrap_or(0);
            let k = *ks.get(idx).ok_or_else(|| {
                CoreError::InvalidSpec(format!(
                    "momentum index {idx} out of range for hop span r = {r}"
                ))
            })?;
            let (a, b) = ring_pair_states(n_half, k, l0)?;
            let e = Complex64::new(2.0 * k.cos(), 0.0);
            Ok((pair.h0, pair.hp, a, b, e, None, Some(k)))
        }
        ModelSpec::TwoSite { eps0, .. } => {
            let pair = spec.build()?;
            let a = StateVector::basis_site(pair.site_map.clone(), 1, 1)?;
            let b = StateVector::basis_site(pair.site_map.clone(), 1, 2)?;
            Ok((pair.h0, pair.hp, a, b, Complex64::new(eps0, 0.0), None, None))
        }
        ModelSpec::SshChain { n_cells, delta, .. } => {
            let pair = spec.build()?;
            let (left, right) = ssh_edge_modes(n_cells, delta)?;
            let scale = ssh_rho(delta).abs().powi(n_cells as i32 - 1);
            Ok((pair.h0, pair.hp, left, right, Complex64::new(0.0, 0.0), Some(scale), None))
        }
        ModelSpec::SshCylinder { m_rows, n_cells, delta, .. } => {
            let pair = spec.build()?;
            let (even, odd) = cylinder_edge_modes(m_rows, n_cells, delta)?;
            let scale = ssh_rho(delta).abs().powi(n_cells as i32 - 1);
            Ok((pair.h0, pair.hp, odd, even, Complex64::new(0.0, 0.0), Some(scale), None))
        }
        ref other => Err(CoreError::InvalidSpec(format!(
            "family {} has no built-in verification quadruple",
            other.family_name()
        ))),
    }
}

fn initial_state(
    spec: &ModelSpec,
    pair: &ModelPair,
    sel: &StateSelector,
) -> Result<StateVector, CoreError> {
    match sel {
        StateSelector::StripeOddRows | StateSelector::StripeEvenRows => match *spec {
            ModelSpec::SshCylinder { m_rows, n_cells, .. } => {
                if matches!(sel, StateSelector::StripeOddRows) {
                    stripe_initial_state(m_rows, n_cells)
                } else {
                    stripe_even_rows(m_rows, n_cells)
                }
            }
            ref other => Err(CoreError::InvalidSpec(format!(
                "stripe states are defined on cylinders, not {}",
                other.family_name()
            ))),
        },
        StateSelector::Site { row, col } => {
            StateVector::basis_site(pair.site_map.clone(), *row, *col)
        }
        StateSelector::SshEdgeLeft => match *spec {
            ModelSpec::SshChain { n_cells, delta, .. } => Ok(ssh_edge_modes(n_cells, delta)?.0),
            ref other => Err(CoreError::InvalidSpec(format!(
                "edge-mode states are defined on dimerized chains, not {}",
                other.family_name()
            ))),
        },
        StateSelector::TwoSiteA => match spec {
            ModelSpec::TwoSite { .. } => StateVector::basis_site(pair.site_map.clone(), 1, 2),
            other => Err(CoreError::InvalidSpec(format!(
                "the feeding dimer state needs a two_site model, not {}",
                other.family_name()
            ))),
        },
        StateSelector::Amplitudes { values } => {
            let amps: Vec<Complex64> = values.iter().map(|p| p.value()).collect();
            StateVector::from_amplitudes(pair.site_map.clone(), amps)
        }
    }
}

fn target_state(
    spec: &ModelSpec,
    pair: &ModelPair,
    sel: &TargetSelector,
    initial: &StateVector,
) -> Result<StateVector, CoreError> {
    match sel {
        TargetSelector::CylinderLo | TargetSelector::CylinderLe => match *spec {
            ModelSpec::SshCylinder { m_rows, n_cells, delta, .. } => {
                let (even, odd) = cylinder_edge_modes(m_rows, n_cells, delta)?;
                Ok(if matches!(sel, TargetSelector::CylinderLo) { odd } else { even })
            }
            ref other => Err(CoreError::InvalidSpec(format!(
                "cylinder edge modes need an ssh_cylinder model, not {}",
                other.family_name()
            ))),
        },
        TargetSelector::SshEdgeLeft => match *spec {
            ModelSpec::SshChain { n_cells, delta, .. } => Ok(ssh_edge_modes(n_cells, delta)?.0),
            ref other => Err(CoreError::InvalidSpec(format!(
                "edge-mode states are defined on dimerized chains, not {}",
                other.family_name()
            ))),
        },
        TargetSelector::Initial => Ok(initial.clone()),
        TargetSelector::TwoSiteC => match spec {
            ModelSpec::TwoSite { .. } => StateVector::basis_site(pair.site_map.clone(), 1, 1),
            other => Err(CoreError::InvalidSpec(format!(
                "the surviving dimer state needs a two_site model, not {}",
                other.family_name()
            ))),
        },
        TargetSelector::Amplitudes { values } => {
            let amps: Vec<Complex64> = values.iter().map(|p| p.value()).collect();
            StateVector::from_amplitudes(pair.site_map.clone(), amps)
        }
    }
}
