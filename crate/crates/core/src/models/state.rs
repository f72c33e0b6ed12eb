use std::sync::Arc;

use num_complex::Complex64;

use crate::error::CoreError;
use crate::models::SiteMap;

/// A state in the site occupancy basis, tied to the lattice layout through
/// its site map. The norm is whatever it is — normalization is an explicit
/// operation, because raw propagated states are deliberately unnormalized.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub amplitudes: Vec<Complex64>,
    pub site_map: Arc<SiteMap>,
}

impl StateVector {
    pub fn zero(site_map: Arc<SiteMap>) -> Self {
        let dim = site_map.dim();
        Self { amplitudes: vec![Complex64::new(0.0, 0.0); dim], site_map }
    }

    pub fn from_amplitudes(
        site_map: Arc<SiteMap>,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self, CoreError> {
        if amplitudes.len() != site_map.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "state length {} vs lattice dimension {}",
                amplitudes.len(),
                site_map.dim()
            )));
        }
        for (i, z) in amplitudes.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(CoreError::InvalidSpec(format!("non-finite amplitude at index {i}")));
            }
        }
        Ok(Self { amplitudes, site_map })
    }

    /// Unit amplitude on one lattice site, zero elsewhere.
    pub fn basis_site(site_map: Arc<SiteMap>, row: usize, col: usize) -> Result<Self, CoreError> {
        let idx = site_map.index_of(row, col).ok_or_else(|| {
            CoreError::InvalidSpec(format!("no lattice site at (row {row}, col {col})"))
        })?;
        let mut s = Self::zero(site_map);
        s.amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩ with the conjugate on `self`.
    pub fn overlap(&self, other: &StateVector) -> Result<Complex64, CoreError> {
        if self.dim() != other.dim() {
            return Err(CoreError::DimensionMismatch(format!(
                "overlap: {} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Scale to unit Euclidean norm; errors on the zero state.
    pub fn normalized(&self) -> Result<StateVector, CoreError> {
        let n = self.norm();
        if n == 0.0 {
            return Err(CoreError::InvalidSpec("cannot normalize a zero state".into()));
        }
        let mut out = self.clone();
        for z in out.amplitudes.iter_mut() {
            *z /= n;
        }
        Ok(out)
    }

    /// Site-resolved probabilities of the normalized state; the entries sum
    /// to exactly 1.0 by construction (last entry absorbs rounding).
    pub fn probabilities(&self) -> Result<Vec<f64>, CoreError> {
        let n2: f64 = self.amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if n2 == 0.0 {
            return Err(CoreError::InvalidSpec("zero state has no probability distribution".into()));
        }
        Ok(self.amplitudes.iter().map(|z| z.norm_sqr() / n2).collect())
    }
}
