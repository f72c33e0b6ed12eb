//! Typed job configuration: a model description plus one job to run on it.
//! Deserialization is strict (unknown keys rejected); serializing a parsed
//! config echoes every default that was applied.

use dp2ep_core::dynamics::PropagationMethod;
use dp2ep_core::models::{ComplexParam, ModelSpec, Truncation};
use dp2ep_core::spectra::{DEFAULT_TOL_CLUSTER, DEFAULT_TOL_RANK};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub model: ModelSpec,
    pub job: JobSpec,
}

fn default_tol_cluster() -> f64 {
    DEFAULT_TOL_CLUSTER
}

fn default_tol_rank() -> f64 {
    DEFAULT_TOL_RANK
}

fn default_theorem_tol() -> f64 {
    1e-10
}

fn default_method() -> PropagationMethod {
    PropagationMethod::FixedStepRk4
}

fn default_k_count() -> usize {
    199
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum JobSpec {
    /// Classify the full spectrum of the model at its configured parameters.
    Spectrum {
        #[serde(default = "default_tol_cluster")]
        tol_cluster: f64,
        #[serde(default = "default_tol_rank")]
        tol_rank: f64,
        output: String,
    },
    /// Rebuild the model for each κ and track the classified clusters.
    EpScan {
        kappa_values: Vec<ComplexParam>,
        output: String,
    },
    /// Verify the degeneracy-to-coalescence hypotheses on the quadruple the
    /// model family defines (pair states, edge modes, or basis sites).
    TheoremCheck {
        #[serde(default = "default_theorem_tol")]
        tol: f64,
        /// For ring models with a hop of span r: which of the r admissible
        /// momenta to use (default 0).
        #[serde(default)]
        k_index: Option<usize>,
        output: String,
    },
    /// Integrate the non-unitary dynamics and record snapshots / fidelity.
    Evolve {
        times: Vec<f64>,
        #[serde(default)]
        dt: Option<f64>,
        #[serde(default = "default_method")]
        method: PropagationMethod,
        #[serde(default)]
        renormalize_internally: bool,
        initial_state: StateSelector,
        #[serde(default)]
        fidelity_target: Option<TargetSelector>,
        /// When set, fidelity is evaluated on the uniform grid 0, Δ, 2Δ, …
        /// up to the last snapshot time, in addition to the snapshot times.
        #[serde(default)]
        fidelity_grid_dt: Option<f64>,
        snapshots_output: String,
        #[serde(default)]
        fidelity_output: Option<String>,
    },
    /// Tabulate the analytic two-band dispersion of the ladder and its gap.
    LadderAnalytic {
        /// Overrides the model's truncation; accepts an integer or
        /// "infinite".
        #[serde(default)]
        n_max: Option<TruncationParam>,
        #[serde(default = "default_k_count")]
        k_count: usize,
        output: String,
        #[serde(default)]
        summary_output: Option<String>,
    },
}

impl JobSpec {
    pub fn kind(&self) -> &'static str {
        match self {
            JobSpec::Spectrum { .. } => "spectrum",
            JobSpec::EpScan { .. } => "ep_scan",
            JobSpec::TheoremCheck { .. } => "theorem_check",
            JobSpec::Evolve { .. } => "evolve",
            JobSpec::LadderAnalytic { .. } => "ladder_analytic",
        }
    }

    /// The config key whose path the `--out` flag overrides.
    pub fn primary_output_key(kind: &str) -> &'static str {
        if kind == "evolve" {
            "snapshots_output"
        } else {
            "output"
        }
    }
}

/// How to build the initial state of an evolution run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSelector {
    /// Column 1 of every odd row, equal weights (cylinder models).
    StripeOddRows,
    /// Column 1 of every even row, equal weights (cylinder models).
    StripeEvenRows,
    /// A single lattice site by 1-based (row, col) label.
    Site { row: usize, col: usize },
    /// The left edge mode of a dimerized chain.
    SshEdgeLeft,
    /// The feeding basis state (0, 1) of the two-site model.
    TwoSiteA,
    /// Explicit amplitudes, one per lattice site.
    Amplitudes { values: Vec<ComplexParam> },
}

/// The reference state a fidelity curve is measured against.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum TargetSelector {
    /// Odd-row edge mode of the cylinder.
    CylinderLo,
    /// Even-row edge mode of the cylinder.
    CylinderLe,
    /// The left edge mode of a dimerized chain.
    SshEdgeLeft,
    /// The (normalized) initial state itself.
    Initial,
    /// The surviving basis state (1, 0) of the two-site model.
    TwoSiteC,
    /// Explicit amplitudes, one per lattice site.
    Amplitudes { values: Vec<ComplexParam> },
}

/// Series truncation in configs: a positive integer or "infinite".
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TruncationParam {
    Finite(usize),
    Keyword(String),
}

impl TruncationParam {
    pub fn to_truncation(&self) -> Option<Truncation> {
        match self {
            TruncationParam::Finite(n) if *n >= 1 => Some(Truncation::Finite(*n)),
            TruncationParam::Keyword(s) if s == "infinite" => Some(Truncation::Infinite),
            _ => None,
        }
    }
}
