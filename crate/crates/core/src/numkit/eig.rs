use num_complex::Complex64;

use crate::error::CoreError;
use crate::numkit::ComplexMatrix;

/// Full two-sided eigendecomposition of a dense complex matrix.
///
/// `right_vectors[k]` / `left_vectors[k]` belong to `eigenvalues[k]`:
/// `H v = λ v` and `H† u = λ* u`, both unit Euclidean norm. For a defective
/// eigenvalue cluster the returned vectors within the cluster may be linearly
/// dependent — that is the signal downstream classification looks for, not an
/// error. Residuals are recorded per pair so callers can judge quality.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub dim: usize,
    /// Sorted ascending by (real part, imaginary part).
    pub eigenvalues: Vec<Complex64>,
    pub right_vectors: Vec<Vec<Complex64>>,
    pub left_vectors: Vec<Vec<Complex64>>,
    /// ‖H v_k − λ_k v_k‖₂ for each (unit-norm) right vector.
    pub residual_right: Vec<f64>,
    /// ‖H† u_k − λ_k* u_k‖₂ for each (unit-norm) left vector.
    pub residual_left: Vec<f64>,
    /// Frobenius norm of the decomposed matrix, kept for residual/cluster scaling.
    pub matrix_norm_fro: f64,
}

impl EigenSystem {
    /// Largest recorded residual over both families.
    pub fn max_residual(&self) -> f64 {
        self.residual_right
            .iter()
            .chain(self.residual_left.iter())
            .fold(0.0f64, |a, &b| a.max(b))
    }
}

/// Complex Givens rotation `G = [[c, s̄], [−s, c]]` (c real) with
/// `G·(a, b)ᵀ = (r, 0)ᵀ`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b / bn);
    }
    let t = an.hypot(bn);
    (an / t, a.conj() * b / (an * t))
}

/// Unitary reduction to upper Hessenberg form by Householder reflections,
/// accumulating the transform into `q` (so that on exit `q† H_in q = H_out`).
fn hessenberg_in_place(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.dim();
    if n <= 2 {
        return;
    }
    for k in 0..n - 2 {
        let m = n - k - 1;
        let mut v: Vec<Complex64> = (0..m).map(|i| h[(k + 1 + i, k)]).collect();
        let sigma = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if sigma == 0.0 {
            continue;
        }
        let x0 = v[0];
        let alpha = if x0.norm() == 0.0 {
            Complex64::new(-sigma, 0.0)
        } else {
            -(x0 / x0.norm()) * sigma
        };
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // Left multiply rows k+1..n (columns before k hold exact zeros already).
        for j in k..n {
            let mut w = Complex64::new(0.0, 0.0);
            for i in 0..m {
                w += v[i].conj() * h[(k + 1 + i, j)];
            }
            w *= tau;
            for i in 0..m {
                let d = w * v[i];
                h[(k + 1 + i, j)] -= d;
            }
        }
        // Right multiply columns k+1..n of every row.
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for (jj, vj) in v.iter().enumerate() {
                w += h[(i, k + 1 + jj)] * vj;
            }
            w *= tau;
            for (jj, vj) in v.iter().enumerate() {
                let d = w * vj.conj();
                h[(i, k + 1 + jj)] -= d;
            }
        }
        for i in 0..n {
            let mut w = Complex64::new(0.0, 0.0);
            for (jj, vj) in v.iter().enumerate() {
                w += q[(i, k + 1 + jj)] * vj;
            }
            w *= tau;
            for (jj, vj) in v.iter().enumerate() {
                let d = w * vj.conj();
                q[(i, k + 1 + jj)] -= d;
            }
        }
        // The reflection maps the column to α e₁ exactly in theory; store that.
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Eigenvalue of the trailing 2×2 block closest to its bottom-right entry.
fn wilkinson_shift(t: &ComplexMatrix, en: usize) -> Complex64 {
    let a = t[(en - 1, en - 1)];
    let b = t[(en - 1, en)];
    let c = t[(en, en - 1)];
    let d = t[(en, en)];
    let delta = (a - d) * 0.5;
    let disc = (delta * delta + b * c).sqrt();
    let denom_plus = delta + disc;
    let denom_minus = delta - disc;
    let denom = if denom_plus.norm() >= denom_minus.norm() { denom_plus } else { denom_minus };
    if denom.norm() == 0.0 {
        d
    } else {
        d - b * c / denom
    }
}

/// One implicit single-shift QR sweep on the unreduced Hessenberg block
/// `[l, en]`, chased with Givens rotations and accumulated into `q`.
fn qr_sweep(t: &mut ComplexMatrix, q: &mut ComplexMatrix, l: usize, en: usize, mu: Complex64) {
    let n = t.dim();
    let mut x = t[(l, l)] - mu;
    let mut z = t[(l + 1, l)];
    for k in l..en {
        let (c, s) = givens(x, z);
        let sc = s.conj();
        // Rows k, k+1 from the left; both rows are zero before column k−1.
        let jmin = if k > l { k - 1 } else { l };
        for j in jmin..n {
            let t1 = t[(k, j)];
            let t2 = t[(k + 1, j)];
            t[(k, j)] = c * t1 + sc * t2;
            t[(k + 1, j)] = -s * t1 + c * t2;
        }
        // Columns k, k+1 from the right; rows beyond k+2 are zero in both.
        let imax = n.min(k + 3);
        for i in 0..imax {
            let t1 = t[(i, k)];
            let t2 = t[(i, k + 1)];
            t[(i, k)] = c * t1 + s * t2;
            t[(i, k + 1)] = -sc * t1 + c * t2;
        }
        for i in 0..n {
            let q1 = q[(i, k)];
            let q2 = q[(i, k + 1)];
            q[(i, k)] = c * q1 + s * q2;
            q[(i, k + 1)] = -sc * q1 + c * q2;
        }
        if k + 1 < en {
            x = t[(k + 1, k)];
            z = t[(k + 2, k)];
        }
    }
}

/// Schur decomposition `H = Q T Q†` with `T` upper triangular and `Q` unitary.
fn schur_decompose(h: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix), CoreError> {
    let n = h.dim();
    let mut t = h.clone();
    let mut q = ComplexMatrix::identity(n)?;
    hessenberg_in_place(&mut t, &mut q);

    let fro = h.frobenius_norm();
    let eps = f64::EPSILON;
    let max_sweeps = 30 * n;
    let mut total_sweeps = 0usize;

    let mut en = n - 1;
    'outer: loop {
        if en == 0 {
            break;
        }
        let mut its = 0usize;
        loop {
            // Smallest l such that the block [l, en] is unreduced; negligible
            // subdiagonal entries are flushed to exact zero.
            let mut l = en;
            while l > 0 {
                let sub = t[(l, l - 1)].norm();
                let mut tst = t[(l - 1, l - 1)].norm() + t[(l, l)].norm();
                if tst == 0.0 {
                    tst = fro;
                }
                if sub <= eps * tst {
                    t[(l, l - 1)] = Complex64::new(0.0, 0.0);
                    break;
                }
                l -= 1;
            }
            if l == en {
                // Eigenvalue at position en has converged.
                en -= 1;
                if en == 0 {
                    break 'outer;
                }
                break;
            }
            if total_sweeps >= max_sweeps {
                return Err(CoreError::NonConvergence { dim: n, norm: fro, sweeps: total_sweeps });
            }
            let mu = if its > 0 && its % 10 == 0 {
                // Exceptional shift to break rare symmetric stalls.
                t[(en, en)] + Complex64::new(0.75 * t[(en, en - 1)].norm(), 0.0)
            } else {
                wilkinson_shift(&t, en)
            };
            qr_sweep(&mut t, &mut q, l, en, mu);
            its += 1;
            total_sweeps += 1;
        }
    }
    // Guarantee an exactly triangular T.
    for i in 1..n {
        t[(i, i - 1)] = Complex64::new(0.0, 0.0);
    }
    Ok((t, q))
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Normalize to unit Euclidean norm and fix the phase so the first
/// largest-magnitude component is real positive (deterministic output).
fn canonicalize(v: &mut [Complex64]) {
    let n = norm2(v);
    if n == 0.0 {
        return;
    }
    let mut idx = 0;
    let mut best = 0.0f64;
    for (i, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best {
            best = m;
            idx = i;
        }
    }
    let phase = v[idx] / v[idx].norm();
    let scale = phase.conj() / n;
    for z in v.iter_mut() {
        *z *= scale;
    }
}

/// Dense eigendecomposition: Hessenberg reduction, implicitly shifted QR to
/// Schur form, then protected triangular substitution for right eigenvectors
/// of `T` and of `T†` (reusing the same unitary `Q`, which pairs each left
/// vector with its right partner automatically).
pub fn eig_full(h: &ComplexMatrix) -> Result<EigenSystem, CoreError> {
    let n = h.dim();
    let fro = h.frobenius_norm();

    if n == 1 {
        let lambda = h[(0, 0)];
        return Ok(EigenSystem {
            dim: 1,
            eigenvalues: vec![lambda],
            right_vectors: vec![vec![Complex64::new(1.0, 0.0)]],
            left_vectors: vec![vec![Complex64::new(1.0, 0.0)]],
            residual_right: vec![0.0],
            residual_left: vec![0.0],
            matrix_norm_fro: fro,
        });
    }

    let (t, q) = schur_decompose(h)?;
    let smin = f64::EPSILON * fro.max(f64::MIN_POSITIVE);
    let smin_c = Complex64::new(smin, 0.0);

    let mut eigenvalues: Vec<Complex64> = (0..n).map(|k| t[(k, k)]).collect();
    let mut right_vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut left_vectors: Vec<Vec<Complex64>> = Vec::with_capacity(n);

    for k in 0..n {
        let lambda = eigenvalues[k];

        // (T − λI) y = 0 with y[k] = 1, back-substitution with protected pivots.
        let mut y = vec![Complex64::new(0.0, 0.0); n];
        y[k] = Complex64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in j + 1..=k {
                acc += t[(j, m)] * y[m];
            }
            let mut d = t[(j, j)] - lambda;
            if d.norm() < smin {
                d = smin_c;
            }
            y[j] = -acc / d;
            let yn = y[j].norm();
            if yn > 1e125 {
                let scale = 1.0 / yn;
                for e in y.iter_mut().take(k + 1).skip(j) {
                    *e *= scale;
                }
            }
        }
        let mut v = q.matvec(&y)?;
        canonicalize(&mut v);
        right_vectors.push(v);

        // (T† − λ*I) w = 0 with w[k] = 1, forward substitution.
        let lbar = lambda.conj();
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        w[k] = Complex64::new(1.0, 0.0);
        for j in k + 1..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in k..j {
                acc += t[(m, j)].conj() * w[m];
            }
            let mut d = t[(j, j)].conj() - lbar;
            if d.norm() < smin {
                d = smin_c;
            }
            w[j] = -acc / d;
            let wn = w[j].norm();
            if wn > 1e125 {
                let scale = 1.0 / wn;
                for e in w.iter_mut().take(j + 1).skip(k) {
                    *e *= scale;
                }
            }
        }
        let mut u = q.matvec(&w)?;
        canonicalize(&mut u);
        left_vectors.push(u);
    }

    // Sort by (re, im) ascending, carrying the vectors along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eigenvalues[a]
            .re
            .total_cmp(&eigenvalues[b].re)
            .then(eigenvalues[a].im.total_cmp(&eigenvalues[b].im))
    });
    eigenvalues = order.iter().map(|&i| eigenvalues[i]).collect();
    right_vectors = order.iter().map(|&i| right_vectors[i].clone()).collect();
    left_vectors = order.iter().map(|&i| left_vectors[i].clone()).collect();

    // Residuals against the original matrix.
    let hadj = h.adjoint();
    let mut residual_right = Vec::with_capacity(n);
    let mut residual_left = Vec::with_capacity(n);
    for k in 0..n {
        let lambda = eigenvalues[k];
        let hv = h.matvec(&right_vectors[k])?;
        let rr = hv
            .iter()
            .zip(right_vectors[k].iter())
            .map(|(a, b)| (a - lambda * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual_right.push(rr);
        let hu = hadj.matvec(&left_vectors[k])?;
        let lbar = lambda.conj();
        let rl = hu
            .iter()
            .zip(left_vectors[k].iter())
            .map(|(a, b)| (a - lbar * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        residual_left.push(rl);
    }

    Ok(EigenSystem {
        dim: n,
        eigenvalues,
        right_vectors,
        left_vectors,
        residual_right,
        residual_left,
        matrix_norm_fro: fro,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::numerical_rank;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn tol_eig(h: &ComplexMatrix) -> f64 {
        1e-10 * h.frobenius_norm().max(1.0)
    }

    #[test]
    fn scalar_case() {
        let h = ComplexMatrix::from_rows(&[vec![c(3.0, 0.0)]]).unwrap();
        let es = eig_full(&h).unwrap();
        assert_eq!(es.eigenvalues, vec![c(3.0, 0.0)]);
        assert_eq!(es.right_vectors[0], vec![c(1.0, 0.0)]);
    }

    #[test]
    fn jordan_block_has_rank_one_eigenvector_span() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let es = eig_full(&h).unwrap();
        for lam in &es.eigenvalues {
            assert!(lam.norm() <= 1e-14);
        }
        let rank = numerical_rank(&es.right_vectors, 1e-6).unwrap();
        assert_eq!(rank, 1);
    }

    #[test]
    fn four_site_uniform_ring_spectrum() {
        // Nearest-neighbour ring with unit bonds on 4 sites.
        let mut h = ComplexMatrix::zeros(4).unwrap();
        for i in 0..4usize {
            let j = (i + 1) % 4;
            h[(i, j)] = c(1.0, 0.0);
            h[(j, i)] = c(1.0, 0.0);
        }
        let es = eig_full(&h).unwrap();
        let expect = [-2.0, 0.0, 0.0, 2.0];
        for (lam, want) in es.eigenvalues.iter().zip(expect.iter()) {
            assert!((lam.re - want).abs() < 1e-12, "{lam} vs {want}");
            assert!(lam.im.abs() < 1e-12);
        }
        assert!(es.max_residual() <= tol_eig(&h));
    }

    #[test]
    fn dense_five_dim_matches_frozen_reference() {
        // Reference eigenvalues computed independently at 17 significant digits.
        let h = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 1.0), c(3.0, -1.0), c(0.5, 0.0)],
            vec![c(0.0, -1.5), c(2.0, 2.0), c(1.0, 0.0), c(-1.0, 0.5), c(2.0, -2.0)],
            vec![c(4.0, 0.0), c(0.5, -0.5), c(-3.0, 1.0), c(0.0, 0.0), c(1.5, 1.0)],
            vec![c(-2.5, 2.0), c(1.0, 1.0), c(0.0, -2.0), c(1.0, -1.0), c(0.0, 3.0)],
            vec![c(0.0, 0.5), c(-1.5, 0.0), c(2.0, 2.5), c(1.0, 0.0), c(-2.0, -0.5)],
        ])
        .unwrap();
        let expect = [
            c(-4.76107476152898101, -3.03915591184408029),
            c(-1.65764392887310086, 1.94657671657318354),
            c(0.354394249322087240, -2.97936871315408958),
            c(1.74317448271513409, 1.49108517396802154),
            c(3.32114995836486449, 4.58086273445696079),
        ];
        let es = eig_full(&h).unwrap();
        for (got, want) in es.eigenvalues.iter().zip(expect.iter()) {
            assert!(
                (got - want).norm() < 1e-12 * h.frobenius_norm(),
                "eigenvalue {got} vs reference {want}"
            );
        }
        assert!(es.max_residual() <= tol_eig(&h), "max residual {}", es.max_residual());
    }

    #[test]
    fn left_vectors_satisfy_adjoint_equation() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.5)],
            vec![c(0.2, 0.0), c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(0.0, -0.3), c(2.0, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let es = eig_full(&h).unwrap();
        let hadj = h.adjoint();
        for k in 0..3 {
            let u = &es.left_vectors[k];
            let hu = hadj.matvec(u).unwrap();
            let lbar = es.eigenvalues[k].conj();
            let r: f64 = hu
                .iter()
                .zip(u.iter())
                .map(|(a, b)| (a - lbar * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(r <= tol_eig(&h), "left residual {r}");
            assert!((es.residual_left[k] - r).abs() < 1e-14);
        }
    }

    #[test]
    fn random_matrices_meet_residual_budget() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x5eed_e16e);
        for trial in 0..20 {
            let n = 2 + (trial % 9) * 7; // 2..=58
            let mut rows = Vec::with_capacity(n);
            for _ in 0..n {
                let row: Vec<Complex64> = (0..n)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect();
                rows.push(row);
            }
            let h = ComplexMatrix::from_rows(&rows).unwrap();
            let es = eig_full(&h).unwrap();
            assert!(
                es.max_residual() <= tol_eig(&h),
                "dim {n}: residual {} over budget {}",
                es.max_residual(),
                tol_eig(&h)
            );
            // Trace check: sum of eigenvalues equals matrix trace.
            let tr: Complex64 = (0..n).map(|i| h[(i, i)]).sum();
            let sum: Complex64 = es.eigenvalues.iter().sum();
            assert!((tr - sum).norm() < 1e-9 * h.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn hermitian_matrices_get_real_eigenvalues() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0xab5eed);
        for _ in 0..10 {
            let n = 12;
            let mut h = ComplexMatrix::zeros(n).unwrap();
            for i in 0..n {
                h[(i, i)] = c(rng.random_range(-1.0..1.0), 0.0);
                for j in 0..i {
                    let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    h[(i, j)] = z;
                    h[(j, i)] = z.conj();
                }
            }
            let es = eig_full(&h).unwrap();
            for lam in &es.eigenvalues {
                assert!(lam.im.abs() <= 1e-10 * h.frobenius_norm());
            }
        }
    }

    #[test]
    fn similarity_transform_preserves_spectrum() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0x51d3_u64 ^ 0x1234);
        let n = 10;
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            rows.push(
                (0..n)
                    .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                    .collect::<Vec<_>>(),
            );
        }
        let h = ComplexMatrix::from_rows(&rows).unwrap();
        // Random unitary from QR of a random matrix is overkill; a simple
        // permutation + diagonal phase similarity suffices to exercise sorting.
        let mut p = ComplexMatrix::zeros(n).unwrap();
        for i in 0..n {
            p[((i + 3) % n, i)] = Complex64::from_polar(1.0, 0.7 * i as f64);
        }
        let pinv = p.adjoint();
        let hs = p.matmul(&h).unwrap().matmul(&pinv).unwrap();
        let e1 = eig_full(&h).unwrap();
        let e2 = eig_full(&hs).unwrap();
        for (a, b) in e1.eigenvalues.iter().zip(e2.eigenvalues.iter()) {
            assert!((a - b).norm() < 1e-8 * h.frobenius_norm().max(1.0), "{a} vs {b}");
        }
    }
}
