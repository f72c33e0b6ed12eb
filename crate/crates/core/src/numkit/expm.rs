use num_complex::Complex64;

use crate::error::CoreError;
use crate::numkit::ComplexMatrix;

/// Padé order-13 numerator/denominator coefficients.
const B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Largest one-norm for which the order-13 approximant alone is accurate to
/// double precision; beyond it the argument is halved `s` times first.
const THETA_13: f64 = 5.371920351148152;

/// Solve `A X = B` by LU decomposition with partial pivoting.
fn lu_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, CoreError> {
    let n = a.dim();
    if b.dim() != n {
        return Err(CoreError::DimensionMismatch(format!("lu_solve: {} vs {}", n, b.dim())));
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let mut pivots: Vec<usize> = (0..n).collect();

    for k in 0..n {
        // Partial pivot: largest magnitude in column k at or below the diagonal.
        let mut pk = k;
        let mut best = lu[(k, k)].norm();
        for i in k + 1..n {
            let m = lu[(i, k)].norm();
            if m > best {
                best = m;
                pk = i;
            }
        }
        if best == 0.0 {
            return Err(CoreError::SingularSystem("exact zero pivot in LU factorization"));
        }
        if pk != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pk, j)];
                lu[(pk, j)] = tmp;
            }
            pivots.swap(k, pk);
        }
        let piv = lu[(k, k)];
        for i in k + 1..n {
            let factor = lu[(i, k)] / piv;
            lu[(i, k)] = factor;
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in k + 1..n {
                let d = factor * lu[(k, j)];
                lu[(i, j)] -= d;
            }
        }
    }

    // Apply the row permutation to the right-hand side.
    let mut xp = ComplexMatrix::zeros(n)?;
    for i in 0..n {
        for j in 0..n {
            xp[(i, j)] = x[(pivots[i], j)];
        }
    }
    x = xp;

    // Forward substitution with unit lower triangle.
    for k in 0..n {
        for i in k + 1..n {
            let factor = lu[(i, k)];
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in 0..n {
                let d = factor * x[(k, j)];
                x[(i, j)] -= d;
            }
        }
    }
    // Back substitution with the upper triangle.
    for k in (0..n).rev() {
        let piv = lu[(k, k)];
        for j in 0..n {
            x[(k, j)] /= piv;
        }
        for i in 0..k {
            let factor = lu[(i, k)];
            if factor.re == 0.0 && factor.im == 0.0 {
                continue;
            }
            for j in 0..n {
                let d = factor * x[(k, j)];
                x[(i, j)] -= d;
            }
        }
    }
    Ok(x)
}

/// Matrix exponential by Padé order-13 approximation with scaling and
/// squaring: scale `A` by `2^{-s}` so its one-norm falls below the order-13
/// accuracy radius, evaluate the rational approximant via one LU solve, then
/// square the result `s` times.
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix, CoreError> {
    let n = a.dim();
    let norm1 = a.one_norm();
    if !norm1.is_finite() {
        return Err(CoreError::InvalidSpec("expm: non-finite matrix norm".into()));
    }

    let s: u32 = if norm1 > THETA_13 {
        (norm1 / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(Complex64::new((0.5f64).powi(s as i32), 0.0));

    let ident = ComplexMatrix::identity(n)?;
    let a2 = scaled.matmul(&scaled)?;
    let a4 = a2.matmul(&a2)?;
    let a6 = a2.matmul(&a4)?;

    let cb = |i: usize| Complex64::new(B[i], 0.0);

    // U = A · (A6·(b13 A6 + b11 A4 + b9 A2) + b7 A6 + b5 A4 + b3 A2 + b1 I)
    let w1 = a6
        .scale(cb(13))
        .add_scaled(Complex64::new(1.0, 0.0), &a4.scale(cb(11)))?
        .add_scaled(Complex64::new(1.0, 0.0), &a2.scale(cb(9)))?;
    let w2 = a6
        .matmul(&w1)?
        .add_scaled(cb(7), &a6)?
        .add_scaled(cb(5), &a4)?
        .add_scaled(cb(3), &a2)?
        .add_scaled(cb(1), &ident)?;
    let u = scaled.matmul(&w2)?;

    // V = A6·(b12 A6 + b10 A4 + b8 A2) + b6 A6 + b4 A4 + b2 A2 + b0 I
    let z1 = a6
        .scale(cb(12))
        .add_scaled(Complex64::new(1.0, 0.0), &a4.scale(cb(10)))?
        .add_scaled(Complex64::new(1.0, 0.0), &a2.scale(cb(8)))?;
    let v = a6
        .matmul(&z1)?
        .add_scaled(cb(6), &a6)?
        .add_scaled(cb(4), &a4)?
        .add_scaled(cb(2), &a2)?
        .add_scaled(cb(0), &ident)?;

    let vmu = v.add_scaled(Complex64::new(-1.0, 0.0), &u)?;
    let vpu = v.add_scaled(Complex64::new(1.0, 0.0), &u)?;
    let mut x = lu_solve(&vmu, &vpu)?;

    for _ in 0..s {
        x = x.matmul(&x)?;
    }
    Ok(x)
}
