use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::{ModelPair, SiteMap};
use crate::numkit::{ComplexMatrix, SparseOperator};

/// Series truncation for the long-range ladder coupling: either keep the
/// first `n` odd harmonics or use the closed-form square-wave limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Truncation {
    Finite(usize),
    Infinite,
}

/// Two coupled uniform periodic chains (legs `a`, `b` on rungs 1..=N) with
/// unit rung and intra-leg bonds, plus the imaginary long-range inter-leg
/// coupling
///
///   Hp = (iJ/2) Σ_j Σ_{n=1}^{n_max} 1/(2n−1) ·
///        (a†_j b_{j+2n−1} + b†_{j+2n−1} a_j − b†_j a_{j+2n−1} − a†_{j+2n−1} b_j),
///
/// with the long-range index wrapping periodically. `n_max` is capped at
/// ⌊N/2⌋ so no term wraps past the far side of the ring.
pub fn build_ladder(n_rungs: usize, j_coupling: f64, n_max: usize) -> Result<ModelPair, CoreError> {
    if n_rungs < 2 {
        return Err(CoreError::InvalidSpec(format!("ladder needs n_rungs >= 2 (got {n_rungs})")));
    }
    if n_max < 1 {
        return Err(CoreError::InvalidSpec("ladder truncation n_max must be >= 1".into()));
    }
    if n_max > n_rungs / 2 {
        return Err(CoreError::InvalidSpec(format!(
            "ladder truncation n_max = {n_max} exceeds the no-double-wrap cap {} for {n_rungs} rungs",
            n_rungs / 2
        )));
    }
    if !j_coupling.is_finite() {
        return Err(CoreError::InvalidSpec("ladder coupling J must be finite".into()));
    }
    let n = n_rungs;
    let dim = 2 * n;
    let site_map = Arc::new(SiteMap::ladder(n));
    let a = |j: usize| 2 * (j % n);
    let b = |j: usize| 2 * (j % n) + 1;

    let mut h0 = SparseOperator::new(dim)?;
    let one = Complex64::new(1.0, 0.0);
    for j in 0..n {
        for (x, y) in [(a(j), b(j)), (a(j), a(j + 1)), (b(j), b(j + 1))] {
            h0.push(x, y, one)?;
            h0.push(y, x, one)?;
        }
    }

    let mut hp = SparseOperator::new(dim)?;
    for j in 0..n {
        for term in 1..=n_max {
            let d = 2 * term - 1;
            let c = Complex64::new(0.0, j_coupling / (2.0 * d as f64));
            hp.push(a(j), b(j + d), c)?;
            hp.push(b(j + d), a(j), c)?;
            hp.push(b(j), a(j + d), -c)?;
            hp.push(a(j + d), b(j), -c)?;
        }
    }
    Ok(ModelPair { h0, hp, site_map, warnings: Vec::new() })
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

/// The odd-harmonic sine series J·Σ sin((2n−1)k)/(2n−1), or its square-wave
/// limit (Jπ/4)·sgn(k) (zero exactly at the discontinuities k ∈ {0, π}).
pub fn ladder_delta_k(k: f64, j_coupling: f64, n_max: Truncation) -> f64 {
    let kw = wrap_k(k);
    match n_max {
        Truncation::Finite(terms) => {
            let mut acc = 0.0f64;
            for n in 1..=terms {
                let d = (2 * n - 1) as f64;
                acc += (d * kw).sin() / d;
            }
            j_coupling * acc
        }
        Truncation::Infinite => {
            if kw == 0.0 || kw == PI || kw == -PI {
                0.0
            } else {
                j_coupling * PI / 4.0 * kw.signum()
            }
        }
    }
}

/// Per-momentum 2×2 Bloch matrix of the ladder,
///
///   h_k = [[2cos k, 1 − Δ_k], [1 + Δ_k, 2cos k]],
///
/// together with its analytic eigenvalues 2cos k ± √(1 − Δ_k²) (complex
/// square root, so the defective/broken regime is represented faithfully).
pub fn ladder_bloch(
    k: f64,
    j_coupling: f64,
    n_max: Truncation,
) -> Result<(ComplexMatrix, [Complex64; 2]), CoreError> {
    if let Truncation::Finite(terms) = n_max {
        if terms < 1 {
            return Err(CoreError::InvalidSpec("ladder truncation n_max must be >= 1".into()));
        }
    }
    if !k.is_finite() || !j_coupling.is_finite() {
        return Err(CoreError::InvalidSpec("ladder Bloch arguments must be finite".into()));
    }
    let kw = wrap_k(k);
    let delta = ladder_delta_k(kw, j_coupling, n_max);
    let diag = Complex64::new(2.0 * kw.cos(), 0.0);
    let h = ComplexMatrix::from_rows(&[
        vec![diag, Complex64::new(1.0 - delta, 0.0)],
        vec![Complex64::new(1.0 + delta, 0.0), diag],
    ])?;
    let root = Complex64::new(1.0 - delta * delta, 0.0).sqrt();
    Ok((h, [diag - root, diag + root]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::eig_full;

    #[test]
    fn hermitian_part_is_hermitian_and_j_zero_kills_hp() {
        let model = build_ladder(8, 0.0, 2).unwrap();
        assert!(model.h0_dense().is_hermitian());
        let hp = model.hp_dense();
        for i in 0..model.dim() {
            for j in 0..model.dim() {
                assert_eq!(hp[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
    }

    #[test]
    fn single_term_coupling_has_four_entries_per_rung() {
        let model = build_ladder(8, 1.0, 1).unwrap();
        let hp = model.hp_dense();
        let mut nnz = 0;
        for i in 0..16 {
            for j in 0..16 {
                if hp[(i, j)].norm() > 0.0 {
                    nnz += 1;
                }
            }
        }
        assert_eq!(nnz, 32);
    }

    #[test]
    fn real_space_spectrum_matches_bloch_union() {
        let n = 8;
        let j = 1.0;
        let n_max = 2;
        let model = build_ladder(n, j, n_max).unwrap();
        let es = eig_full(&model.total_dense()).unwrap();
        let mut bloch: Vec<Complex64> = Vec::new();
        for m in 0..n {
            let k = PI * (2 * m as i64 - n as i64) as f64 / n as f64;
            let (_, eigs) = ladder_bloch(k, j, Truncation::Finite(n_max)).unwrap();
            bloch.extend_from_slice(&eigs);
        }
        bloch.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        for (got, want) in es.eigenvalues.iter().zip(bloch.iter()) {
            assert!((got - want).norm() < 1e-10, "{got} vs {want}");
        }
    }

    #[test]
    fn bloch_limits_and_partial_sums() {
        // k = 0: the sine series vanishes for any J.
        let (_, eigs) = ladder_bloch(0.0, 3.7, Truncation::Infinite).unwrap();
        assert!((eigs[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((eigs[1] - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        // Square-wave limit at J = 4/π makes the matrix defective at k = π/2.
        let (h, eigs) = ladder_bloch(PI / 2.0, 4.0 / PI, Truncation::Infinite).unwrap();
        assert!(eigs[0].norm() < 1e-15 && eigs[1].norm() < 1e-15);
        assert!(h[(0, 1)].norm() < 1e-15);
        assert!((h[(1, 0)].re - 2.0).abs() < 1e-15);
        // Three-term partial sum at k = π/3.
        let d = ladder_delta_k(PI / 3.0, 1.0, Truncation::Finite(3));
        let want = (PI / 3.0).sin() + (PI).sin() / 3.0 + (5.0 * PI / 3.0).sin() / 5.0;
        assert!((d - want).abs() < 1e-15);
        assert!((d - 0.69282).abs() < 5e-5);
    }

    #[test]
    fn truncation_cap_and_size_guards() {
        assert!(build_ladder(1, 1.0, 1).is_err());
        assert!(build_ladder(8, 1.0, 0).is_err());
        assert!(build_ladder(8, 1.0, 5).is_err());
        assert!(build_ladder(8, f64::NAN, 1).is_err());
        assert!(build_ladder(8, 1.0, 4).is_ok());
    }
}
