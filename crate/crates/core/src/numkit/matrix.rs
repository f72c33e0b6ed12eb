use num_complex::Complex64;

use crate::error::CoreError;

/// Dense square complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension (`dim >= 1`).
    pub fn zeros(dim: usize) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::InvalidSpec("matrix dimension must be >= 1".into()));
        }
        Ok(Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Result<Self, CoreError> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from rows; validates squareness and finiteness.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, CoreError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(CoreError::InvalidSpec("matrix dimension must be >= 1".into()));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(CoreError::DimensionMismatch(format!(
                    "row {i} has length {} in a {dim}-dimensional matrix",
                    row.len()
                )));
            }
            for z in row {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(CoreError::InvalidSpec(format!(
                        "non-finite entry at row {i}"
                    )));
                }
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self { dim: n, data: vec![Complex64::new(0.0, 0.0); n * n] };
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> f64 {
        let n = self.dim;
        let mut best = 0.0f64;
        for j in 0..n {
            let s: f64 = (0..n).map(|i| self.data[i * n + j].norm()).sum();
            best = best.max(s);
        }
        best
    }

    /// Maximum absolute row sum.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim;
        let mut best = 0.0f64;
        for i in 0..n {
            let s: f64 = (0..n).map(|j| self.data[i * n + j].norm()).sum();
            best = best.max(s);
        }
        best
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Result<Vec<Complex64>, CoreError> {
        if v.len() != self.dim {
            return Err(CoreError::DimensionMismatch(format!(
                "matvec: matrix dim {} vs vector length {}",
                self.dim,
                v.len()
            )));
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            let row = &self.data[i * n..(i + 1) * n];
            for (a, x) in row.iter().zip(v.iter()) {
                acc += a * x;
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Matrix-matrix product.
    pub fn matmul(&self, rhs: &Self) -> Result<Self, CoreError> {
        if self.dim != rhs.dim {
            return Err(CoreError::DimensionMismatch(format!(
                "matmul: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let n = self.dim;
        let mut out = Self::zeros(n)?;
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rrow = &rhs.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(rrow.iter()) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `self + scale * rhs`.
    pub fn add_scaled(&self, scale: Complex64, rhs: &Self) -> Result<Self, CoreError> {
        if self.dim != rhs.dim {
            return Err(CoreError::DimensionMismatch(format!(
                "add: {} vs {}",
                self.dim, rhs.dim
            )));
        }
        let mut out = self.clone();
        for (o, b) in out.data.iter_mut().zip(rhs.data.iter()) {
            *o += scale * b;
        }
        Ok(out)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z *= s;
        }
        out
    }

    /// Exact entry-by-entry Hermiticity test (no tolerance).
    pub fn is_hermitian(&self) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in 0..=i {
                if self.data[i * n + j] != self.data[j * n + i].conj() {
                    return false;
                }
            }
        }
        true
    }

}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_zero_dim_and_ragged_rows() {
        assert!(ComplexMatrix::zeros(0).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![c(0.0, 0.0)]]).is_err());
    }

    #[test]
    fn rejects_non_finite_entries() {
        assert!(ComplexMatrix::from_rows(&[vec![c(f64::NAN, 0.0)]]).is_err());
        assert!(ComplexMatrix::from_rows(&[vec![c(0.0, f64::INFINITY)]]).is_err());
    }

    #[test]
    fn norms_and_adjoint() {
        let m =
            ComplexMatrix::from_rows(&[vec![c(3.0, 0.0), c(0.0, 4.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]])
                .unwrap();
        assert!((m.frobenius_norm() - 5.0).abs() < 1e-15);
        assert!((m.one_norm() - 4.0).abs() < 1e-15);
        assert!((m.inf_norm() - 7.0).abs() < 1e-15);
        let a = m.adjoint();
        assert_eq!(a[(1, 0)], c(0.0, -4.0));
        assert_eq!(a[(0, 0)], c(3.0, 0.0));
    }

    #[test]
    fn matmul_matches_hand_product() {
        let a = ComplexMatrix::from_rows(&[
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, -1.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let p = a.matmul(&b).unwrap();
        // (1+i)*i + 2*1 = i + i^2 + 2 = 1 + i
        assert_eq!(p[(0, 0)], c(1.0, 1.0));
        assert_eq!(p[(0, 1)], c(1.0, 1.0));
        assert_eq!(p[(1, 0)], c(2.0, 0.0));
        assert_eq!(p[(1, 1)], c(0.0, -1.0));
    }

    #[test]
    fn hermitian_detection_is_exact() {
        let mut m = ComplexMatrix::zeros(2).unwrap();
        m[(0, 1)] = c(1.0, 2.0);
        m[(1, 0)] = c(1.0, -2.0);
        assert!(m.is_hermitian());
        m[(1, 0)] = c(1.0, -2.0000000000000004);
        assert!(!m.is_hermitian());
    }
}
