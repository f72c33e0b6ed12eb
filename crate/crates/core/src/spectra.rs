//! Spectral classification: eigenvalue clustering, biorthogonal diagnostics,
//! and the simple/degenerate/defective trichotomy per cluster, plus κ-sweeps
//! that exhibit how robust a defective cluster is to the coupling strength.

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::{ModelSpec, Truncation};
use crate::numkit::{eig_full, numerical_rank, svd, ComplexMatrix, EigenSystem};

/// Relative eigenvalue-clustering tolerance used when none is given.
pub const DEFAULT_TOL_CLUSTER: f64 = 1e-6;
/// Singular-value ratio below which eigenvectors count as dependent.
pub const DEFAULT_TOL_RANK: f64 = 1e-6;

/// What a cluster of (near-)equal eigenvalues is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Classification {
    /// Algebraic multiplicity 1.
    Simple,
    /// Multiple eigenvalues with a full set of independent eigenvectors.
    Dp,
    /// Defective: fewer independent eigenvectors than eigenvalues.
    Ep,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Simple => "SIMPLE",
            Classification::Dp => "DP",
            Classification::Ep => "EP",
        }
    }
}

/// A group of eigenvalues within linking distance of each other, with the
/// multiplicity bookkeeping that separates degeneracy from coalescence.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Mean of the member eigenvalues.
    pub representative: Complex64,
    /// Indices into the eigen-system, ascending.
    pub members: Vec<usize>,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    /// Smallest |⟨u_k|v_k⟩| over matched left/right pairs in the cluster.
    pub min_phase_rigidity: f64,
    /// Same quantity recorded as the biorthogonal-norm magnitude.
    pub min_biorthogonal_norm: f64,
    pub class: Classification,
    /// For a defective cluster: the single surviving eigenvector, extracted
    /// as the right singular vector of H − λI with the smallest singular
    /// value. `None` for non-defective clusters or when H was not available.
    pub coalescing_state: Option<Vec<Complex64>>,
}

/// Full spectral analysis of one matrix.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub eigen: EigenSystem,
    pub clusters: Vec<Cluster>,
    pub tol_cluster: f64,
    pub tol_rank: f64,
}

/// ⟨u|v⟩ with the conjugate on `u`; for unit vectors its magnitude is the
/// phase rigidity of the pair, and it vanishes at coalescence.
pub fn biorthogonal_norm(u_left: &[Complex64], v_right: &[Complex64]) -> Result<Complex64, CoreError> {
    if u_left.len() != v_right.len() {
        return Err(CoreError::DimensionMismatch(format!(
            "biorthogonal norm: {} vs {}",
            u_left.len(),
            v_right.len()
        )));
    }
    Ok(u_left.iter().zip(v_right.iter()).map(|(a, b)| a.conj() * b).sum())
}

/// Group eigenvalue indices by single linkage at the given absolute distance.
fn single_linkage(eigenvalues: &[Complex64], link: f64) -> Vec<Vec<usize>> {
    let n = eigenvalues.len();
    let mut assigned = vec![false; n];
    let mut groups = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        let mut members = vec![start];
        assigned[start] = true;
        let mut frontier = vec![start];
        while let Some(i) = frontier.pop() {
            for j in 0..n {
                if !assigned[j] && (eigenvalues[i] - eigenvalues[j]).norm() <= link {
                    assigned[j] = true;
                    members.push(j);
                    frontier.push(j);
                }
            }
        }
        members.sort_unstable();
        groups.push(members);
    }
    // Deterministic order: by smallest member index, which follows the
    // (re, im) eigenvalue sort.
    groups.sort_by_key(|g| g[0]);
    groups
}

fn build_clusters(
    es: &EigenSystem,
    tol_cluster: f64,
    tol_rank: f64,
    h: Option<&ComplexMatrix>,
) -> Result<Vec<Cluster>, CoreError> {
    if tol_cluster <= 0.0 || tol_rank <= 0.0 {
        return Err(CoreError::InvalidSpec("clustering tolerances must be > 0".into()));
    }
    let link = tol_cluster * es.matrix_norm_fro.max(1.0);
    let groups = single_linkage(&es.eigenvalues, link);
    let mut clusters = Vec::with_capacity(groups.len());
    for members in groups {
        let alg = members.len();
        let representative =
            members.iter().map(|&i| es.eigenvalues[i]).sum::<Complex64>() / alg as f64;
        let stacked: Vec<Vec<Complex64>> =
            members.iter().map(|&i| es.right_vectors[i].clone()).collect();
        let geo = numerical_rank(&stacked, tol_rank)?;
        let mut min_rigidity = f64::INFINITY;
        for &i in &members {
            let r = biorthogonal_norm(&es.left_vectors[i], &es.right_vectors[i])?.norm();
            min_rigidity = min_rigidity.min(r);
        }
        let class = if geo < alg {
            Classification::Ep
        } else if alg >= 2 {
            Classification::Dp
        } else {
            Classification::Simple
        };
        let coalescing_state = match (class, h) {
            (Classification::Ep, Some(h)) => Some(coalescing_vector(h, representative)?),
            _ => None,
        };
        clusters.push(Cluster {
            representative,
            members,
            algebraic_multiplicity: alg,
            geometric_multiplicity: geo,
            min_phase_rigidity: min_rigidity,
            min_biorthogonal_norm: min_rigidity,
            class,
            coalescing_state,
        });
    }
    Ok(clusters)
}

/// The most-null direction of H − λI: right singular vector belonging to the
/// smallest singular value, i.e. the best single eigenvector of the cluster.
fn coalescing_vector(h: &ComplexMatrix, lambda: Complex64) -> Result<Vec<Complex64>, CoreError> {
    let n = h.dim();
    let mut columns = vec![vec![Complex64::new(0.0, 0.0); n]; n];
    for j in 0..n {
        for i in 0..n {
            columns[j][i] = h[(i, j)] - if i == j { lambda } else { Complex64::new(0.0, 0.0) };
        }
    }
    let s = svd(&columns)?;
    let mut v = s.v.last().expect("dim >= 1").clone();
    // Deterministic phase: first largest-magnitude component real positive.
    let mut idx = 0;
    let mut best = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            idx = i;
        }
    }
    if best > 0.0 {
        let phase = v[idx] / v[idx].norm();
        let conj = phase.conj();
        for z in v.iter_mut() {
            *z *= conj;
        }
    }
    Ok(v)
}

/// Cluster an existing eigen-system. Geometric multiplicities use the module
/// default rank tolerance; coalescing vectors are omitted (no matrix here).
pub fn cluster_spectrum(es: &EigenSystem, tol_cluster: f64) -> Result<Vec<Cluster>, CoreError> {
    build_clusters(es, tol_cluster, DEFAULT_TOL_RANK, None)
}

/// Decompose, cluster, and classify a matrix in one step.
pub fn classify(
    h: &ComplexMatrix,
    tol_cluster: f64,
    tol_rank: f64,
) -> Result<SpectralReport, CoreError> {
    let es = eig_full(h)?;
    let clusters = build_clusters(&es, tol_cluster, tol_rank, Some(h))?;
    Ok(SpectralReport { eigen: es, clusters, tol_cluster, tol_rank })
}

/// One cluster of one sweep row, carrying the identity it was tracked under.
#[derive(Debug, Clone)]
pub struct TrackedCluster {
    pub id: usize,
    pub representative: Complex64,
    pub algebraic_multiplicity: usize,
    pub geometric_multiplicity: usize,
    pub min_phase_rigidity: f64,
    pub class: Classification,
}

/// Result of rebuilding and classifying the model at one κ.
pub type EpScanRow = Result<Vec<TrackedCluster>, CoreError>;

/// Rebuild the model for each κ, classify, and track clusters across rows by
/// nearest representative (ties to the smaller imaginary part, greedily,
/// each target used once). Per-row failures are recorded and the sweep
/// continues.
pub fn ep_scan(template: &ModelSpec, kappa_values: &[Complex64]) -> Result<Vec<(Complex64, EpScanRow)>, CoreError> {
    if kappa_values.is_empty() {
        return Err(CoreError::InvalidSpec("kappa sweep needs at least one value".into()));
    }
    let mut rows: Vec<(Complex64, EpScanRow)> = Vec::with_capacity(kappa_values.len());
    // Representatives of the previous successful row, by tracked ID.
    let mut anchors: Option<Vec<Complex64>> = None;
    for &kappa in kappa_values {
        let row = scan_one(template, kappa, &mut anchors);
        rows.push((kappa, row));
    }
    Ok(rows)
}

fn scan_one(
    template: &ModelSpec,
    kappa: Complex64,
    anchors: &mut Option<Vec<Complex64>>,
) -> EpScanRow {
    let spec = template.with_kappa(kappa)?;
    let model = spec.build()?;
    let report = classify(&model.total_dense(), DEFAULT_TOL_CLUSTER, DEFAULT_TOL_RANK)?;
    let clusters = report.clusters;
    let ids = match anchors.as_ref() {
        None => (0..clusters.len()).collect::<Vec<usize>>(),
        Some(prev) => assign_ids(&clusters, prev),
    };
    // Update anchor positions for the IDs seen in this row.
    let max_id = ids.iter().copied().max().unwrap_or(0);
    let mut new_anchors = match anchors.take() {
        Some(mut a) => {
            if a.len() <= max_id {
                a.resize(max_id + 1, Complex64::new(f64::INFINITY, 0.0));
            }
            a
        }
        None => vec![Complex64::new(f64::INFINITY, 0.0); max_id + 1],
    };
    for (cluster, &id) in clusters.iter().zip(ids.iter()) {
        new_anchors[id] = cluster.representative;
    }
    *anchors = Some(new_anchors);

    Ok(clusters
        .iter()
        .zip(ids.iter())
        .map(|(c, &id)| TrackedCluster {
            id,
            representative: c.representative,
            algebraic_multiplicity: c.algebraic_multiplicity,
            geometric_multiplicity: c.geometric_multiplicity,
            min_phase_rigidity: c.min_phase_rigidity,
            class: c.class,
        })
        .collect())
}

/// Greedy unique assignment of clusters to anchor IDs: candidate pairs are
/// taken in increasing distance (ties: smaller |Im| of the cluster, then
/// smaller indices); clusters left over get fresh IDs.
fn assign_ids(clusters: &[Cluster], anchors: &[Complex64]) -> Vec<usize> {
    let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::new();
    for (ci, c) in clusters.iter().enumerate() {
        for (ai, a) in anchors.iter().enumerate() {
            if a.re.is_finite() {
                pairs.push(((c.representative - a).norm(), c.representative.im.abs(), ci, ai));
            }
        }
    }
    pairs.sort_by(|x, y| {
        x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)).then(x.3.cmp(&y.3))
    });
    let mut ids = vec![usize::MAX; clusters.len()];
    let mut used = vec![false; anchors.len()];
    for (_, _, ci, ai) in pairs {
        if ids[ci] == usize::MAX && !used[ai] {
            ids[ci] = ai;
            used[ai] = true;
        }
    }
    let mut next = anchors.len();
    for id in ids.iter_mut() {
        if *id == usize::MAX {
            *id = next;
            next += 1;
        }
    }
    ids
}

/// Minimum of |ε₊ − ε₋| over the momentum grid, from the analytic two-band
/// dispersion, together with the k achieving it. The grid must stay at least
/// π/50 away from the series discontinuities at k ∈ {0, ±π}.
pub fn ladder_gap_closing(
    j_coupling: f64,
    n_max: Truncation,
    k_grid: &[f64],
) -> Result<(f64, f64), CoreError> {
    if k_grid.is_empty() {
        return Err(CoreError::InvalidSpec("gap scan needs a nonempty k grid".into()));
    }
    let margin = std::f64::consts::PI / 50.0;
    for &k in k_grid {
        if !k.is_finite() {
            return Err(CoreError::InvalidSpec("gap scan momenta must be finite".into()));
        }
        let d0 = k.abs();
        let dpi = (k.abs() - std::f64::consts::PI).abs();
        if d0 < margin || dpi < margin {
            return Err(CoreError::InvalidSpec(format!(
                "momentum {k} is within π/50 of a series discontinuity at 0 or ±π"
            )));
        }
    }
    let mut best_gap = f64::INFINITY;
    let mut best_k = k_grid[0];
    for &k in k_grid {
        let (_, eigs) = crate::models::ladder_bloch(k, j_coupling, n_max)?;
        let gap = (eigs[1] - eigs[0]).norm();
        if gap < best_gap {
            best_gap = gap;
            best_k = k;
        }
    }
    Ok((best_gap, best_k))
}
