use num_complex::Complex64;

use crate::error::CoreError;

/// Thin singular value decomposition `A = U Σ V†` of an m×n complex matrix
/// (m ≥ 1, n ≥ 1), computed by one-sided Jacobi rotations on the columns.
///
/// `u` holds min(m,n)... — in fact n columns of length m (columns whose
/// singular value is zero are left as zero vectors); `v` is n×n unitary.
/// Singular values are sorted descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Vec<Vec<Complex64>>,
    pub singular_values: Vec<f64>,
    pub v: Vec<Vec<Complex64>>,
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// One-sided Jacobi SVD on the columns of `a` (each entry of `columns` is one
/// column vector of length m). Returns U (as columns), σ (descending), V (as
/// columns of the n×n right factor).
pub fn svd(columns: &[Vec<Complex64>]) -> Result<Svd, CoreError> {
    let n = columns.len();
    if n == 0 {
        return Ok(Svd { u: Vec::new(), singular_values: Vec::new(), v: Vec::new() });
    }
    let m = columns[0].len();
    if m == 0 {
        return Err(CoreError::InvalidSpec("svd: zero-length column vectors".into()));
    }
    for (j, col) in columns.iter().enumerate() {
        if col.len() != m {
            return Err(CoreError::DimensionMismatch(format!(
                "svd: column {j} has length {} but column 0 has length {m}",
                col.len()
            )));
        }
        for z in col {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(CoreError::InvalidSpec(format!("svd: non-finite entry in column {j}")));
            }
        }
    }

    let mut w: Vec<Vec<Complex64>> = columns.to_vec();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); n];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let max_sweeps = 60;
    let mut sweeps = 0usize;

    loop {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let gamma = dot_conj(&w[p], &w[q]);
                let alpha = norm_sqr(&w[p]);
                let beta = norm_sqr(&w[q]);
                let g = gamma.norm();
                // Cauchy–Schwarz gives g ≤ √(αβ); the pair is converged once
                // the cross term is negligible on that scale.
                if g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Phase that makes the cross product real, then a real Jacobi
                // rotation diagonalizing [[α, g],[g, β]].
                let phase = gamma / g; // e^{iθ}
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph_conj = phase.conj();
                for i in 0..m {
                    let wp = w[p][i];
                    let wq = w[q][i];
                    w[p][i] = c * wp - s * (ph_conj * wq);
                    w[q][i] = s * (phase * wp) + c * wq;
                }
                for i in 0..n {
                    let vp = v[p][i];
                    let vq = v[q][i];
                    v[p][i] = c * vp - s * (ph_conj * vq);
                    v[q][i] = s * (phase * vp) + c * vq;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps >= max_sweeps {
            return Err(CoreError::SvdNonConvergence { rows: m, cols: n, sweeps });
        }
    }

    let mut sigma: Vec<f64> = w.iter().map(|col| norm_sqr(col).sqrt()).collect();
    let mut u: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (j, col) in w.iter().enumerate() {
        if sigma[j] > 0.0 {
            u.push(col.iter().map(|z| z / sigma[j]).collect());
        } else {
            u.push(vec![Complex64::new(0.0, 0.0); m]);
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    sigma = order.iter().map(|&i| sigma[i]).collect();
    u = order.iter().map(|&i| u[i].clone()).collect();
    let v = order.iter().map(|&i| v[i].clone()).collect();

    Ok(Svd { u, singular_values: sigma, v })
}

/// Number of singular values exceeding `tol ·` (largest singular value).
/// The rank of an empty list is 0.
pub fn numerical_rank(vectors: &[Vec<Complex64>], tol: f64) -> Result<usize, CoreError> {
    if tol <= 0.0 {
        return Err(CoreError::InvalidSpec(format!("numerical_rank: tol must be > 0, got {tol}")));
    }
    if vectors.is_empty() {
        return Ok(0);
    }
    let s = svd(vectors)?;
    let smax = s.singular_values.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(s.singular_values.iter().filter(|&&x| x > tol * smax).count())
}
