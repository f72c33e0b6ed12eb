use num_complex::Complex64;

use crate::error::CoreError;
use crate::numkit::ComplexMatrix;

/// Sparse square operator stored as a triplet list `(row, col, amplitude)`.
///
/// Duplicate `(row, col)` entries are allowed and act additively. `apply`
/// accumulates strictly in triplet order, so results are bit-for-bit
/// reproducible for a given triplet list.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    triplets: Vec<(usize, usize, Complex64)>,
}

impl SparseOperator {
    pub fn new(dim: usize) -> Result<Self, CoreError> {
        if dim == 0 {
            return Err(CoreError::InvalidSpec("operator dimension must be >= 1".into()));
        }
        Ok(Self { dim, triplets: Vec::new() })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn triplets(&self) -> &[(usize, usize, Complex64)] {
        &self.triplets
    }

    pub fn nnz(&self) -> usize {
        self.triplets.len()
    }

    /// Append one triplet; indices are 0-based and bounds-checked.
    pub fn push(&mut self, row: usize, col: usize, amp: Complex64) -> Result<(), CoreError> {
        if row >= self.dim || col >= self.dim {
            return Err(CoreError::DimensionMismatch(format!(
                "triplet ({row}, {col}) out of bounds for dimension {}",
                self.dim
            )));
        }
        if !amp.re.is_finite() || !amp.im.is_finite() {
            return Err(CoreError::InvalidSpec(format!(
                "non-finite amplitude at ({row}, {col})"
            )));
        }
        self.triplets.push((row, col, amp));
        Ok(())
    }

    /// Dense lift; duplicate triplets are summed in triplet order.
    pub fn to_dense(&self) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(self.dim).expect("dim >= 1 by construction");
        for &(r, c, a) in &self.triplets {
            m[(r, c)] += a;
        }
        m
    }

    /// Exact sparsification of a dense matrix (keeps every nonzero entry).
    pub fn from_dense(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut op = Self::new(n).expect("dense matrix has dim >= 1");
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                if z.re != 0.0 || z.im != 0.0 {
                    op.triplets.push((i, j, z));
                }
            }
        }
        op
    }

    /// Entries combined per matrix position (duplicates summed in triplet
    /// order), sorted by `(row, col)`. Shared by the norm routines so they do
    /// not depend on triplet insertion order.
    fn combined_entries(&self) -> Vec<(usize, usize, Complex64)> {
        let mut sorted = self.triplets.clone();
        sorted.sort_by_key(|&(r, c, _)| (r, c));
        let mut out: Vec<(usize, usize, Complex64)> = Vec::with_capacity(sorted.len());
        for (r, c, a) in sorted {
            match out.last_mut() {
                Some(&mut (lr, lc, ref mut la)) if lr == r && lc == c => *la += a,
                _ => out.push((r, c, a)),
            }
        }
        out
    }

    /// Maximum absolute column sum of the (duplicate-summed) operator.
    pub fn one_norm(&self) -> f64 {
        let mut col_sums = vec![0.0f64; self.dim];
        for (_, c, a) in self.combined_entries() {
            col_sums[c] += a.norm();
        }
        col_sums.into_iter().fold(0.0, f64::max)
    }

    /// Maximum absolute row sum of the (duplicate-summed) operator.
    pub fn inf_norm(&self) -> f64 {
        let mut row_sums = vec![0.0f64; self.dim];
        for (r, _, a) in self.combined_entries() {
            row_sums[r] += a.norm();
        }
        row_sums.into_iter().fold(0.0, f64::max)
    }
}

/// `y = op * x`, accumulating contributions strictly in triplet order.
pub fn apply(op: &SparseOperator, x: &[Complex64]) -> Result<Vec<Complex64>, CoreError> {
    if x.len() != op.dim {
        return Err(CoreError::DimensionMismatch(format!(
            "apply: operator dim {} vs vector length {}",
            op.dim,
            x.len()
        )));
    }
    let mut y = vec![Complex64::new(0.0, 0.0); op.dim];
    for &(r, c, a) in &op.triplets {
        y[r] += a * x[c];
    }
    Ok(y)
}
