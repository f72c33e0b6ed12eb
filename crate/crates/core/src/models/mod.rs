//! Lattice model constructors.
//!
//! Every family produces a [`ModelPair`]: a Hermitian part `H0` built from
//! conjugate-symmetric bond entries and a (generally) non-Hermitian part
//! `Hp`, tied together by a [`SiteMap`] translating between matrix indices
//! and 1-based lattice coordinates. Closed-form special states (degenerate
//! plane-wave pairs, dimerized-chain edge modes, cylinder boundary modes)
//! live next to their builders.

mod cylinder;
mod kspace;
mod ladder;
mod pair;
mod ring;
mod site_map;
mod ssh;
mod state;
mod two_site;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CoreError;

pub use cylinder::{
    build_ssh_cylinder, cylinder_boundary_residual, cylinder_edge_modes, RowCoupling,
};
pub use kspace::{build_kspace_ring, kspace_cot_matrix};
pub use ladder::{build_ladder, ladder_bloch, ladder_delta_k, Truncation};
pub use pair::ModelPair;
pub use ring::{admissible_k, attach_unidirectional, build_ring, plane_wave, ring_pair_states};
pub use site_map::{SiteLabel, SiteMap, Topology};
pub use ssh::{build_ssh_chain, ssh_boundary_residual, ssh_edge_modes, ssh_rho};
pub use state::StateVector;
pub use two_site::build_two_site;

/// A complex scalar in configs: either a plain number (real) or a
/// `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexParam {
    Real(f64),
    Pair([f64; 2]),
}

impl ComplexParam {
    pub fn value(self) -> Complex64 {
        match self {
            ComplexParam::Real(x) => Complex64::new(x, 0.0),
            ComplexParam::Pair([re, im]) => Complex64::new(re, im),
        }
    }
}

impl From<f64> for ComplexParam {
    fn from(x: f64) -> Self {
        ComplexParam::Real(x)
    }
}

impl From<Complex64> for ComplexParam {
    fn from(z: Complex64) -> Self {
        if z.im == 0.0 {
            ComplexParam::Real(z.re)
        } else {
            ComplexParam::Pair([z.re, z.im])
        }
    }
}

/// Declarative description of one model instance; the JSON-facing surface of
/// this module. Site counts and indices are 1-based as in the configs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    Ring {
        n_half: usize,
    },
    RingWithHop {
        n_half: usize,
        l0: usize,
        r: usize,
        kappa: ComplexParam,
    },
    KspaceRing {
        n_sites: usize,
        kappa: ComplexParam,
    },
    Ladder {
        n_rungs: usize,
        j: f64,
        n_max: usize,
    },
    SshChain {
        n_cells: usize,
        delta: f64,
        kappa: ComplexParam,
    },
    SshCylinder {
        m_rows: usize,
        n_cells: usize,
        delta: f64,
        j_inter: f64,
        kappa: ComplexParam,
        #[serde(default)]
        row_coupling: RowCoupling,
    },
    TwoSite {
        kappa: ComplexParam,
        eps0: f64,
    },
}

impl ModelSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            ModelSpec::Ring { .. } => "ring",
            ModelSpec::RingWithHop { .. } => "ring_with_hop",
            ModelSpec::KspaceRing { .. } => "kspace_ring",
            ModelSpec::Ladder { .. } => "ladder",
            ModelSpec::SshChain { .. } => "ssh_chain",
            ModelSpec::SshCylinder { .. } => "ssh_cylinder",
            ModelSpec::TwoSite { .. } => "two_site",
        }
    }

    /// The non-Hermitian coupling strength, for families that have one.
    pub fn kappa(&self) -> Option<Complex64> {
        match self {
            ModelSpec::Ring { .. } | ModelSpec::Ladder { .. } => None,
            ModelSpec::RingWithHop { kappa, .. }
            | ModelSpec::KspaceRing { kappa, .. }
            | ModelSpec::SshChain { kappa, .. }
            | ModelSpec::SshCylinder { kappa, .. }
            | ModelSpec::TwoSite { kappa, .. } => Some(kappa.value()),
        }
    }

    /// Copy of the description with κ replaced — the sweep primitive.
    pub fn with_kappa(&self, kappa: Complex64) -> Result<ModelSpec, CoreError> {
        let mut out = self.clone();
        match &mut out {
            ModelSpec::RingWithHop { kappa: k, .. }
            | ModelSpec::KspaceRing { kappa: k, .. }
            | ModelSpec::SshChain { kappa: k, .. }
            | ModelSpec::SshCylinder { kappa: k, .. }
            | ModelSpec::TwoSite { kappa: k, .. } => {
                *k = kappa.into();
                Ok(out)
            }
            ModelSpec::Ring { .. } | ModelSpec::Ladder { .. } => Err(CoreError::InvalidSpec(
                format!("family {} has no kappa parameter to sweep", self.family_name()),
            )),
        }
    }

    /// Materialize the Hamiltonian pair.
    pub fn build(&self) -> Result<ModelPair, CoreError> {
        match *self {
            ModelSpec::Ring { n_half } => build_ring(n_half),
            ModelSpec::RingWithHop { n_half, l0, r, kappa } => {
                let base = build_ring(n_half)?;
                attach_unidirectional(&base, l0, r, kappa.value())
            }
            ModelSpec::KspaceRing { n_sites, kappa } => build_kspace_ring(n_sites, kappa.value()),
            ModelSpec::Ladder { n_rungs, j, n_max } => build_ladder(n_rungs, j, n_max),
            ModelSpec::SshChain { n_cells, delta, kappa } => {
                build_ssh_chain(n_cells, delta, kappa.value())
            }
            ModelSpec::SshCylinder { m_rows, n_cells, delta, j_inter, kappa, row_coupling } => {
                build_ssh_cylinder(m_rows, n_cells, delta, j_inter, kappa.value(), row_coupling)
            }
            ModelSpec::TwoSite { kappa, eps0 } => build_two_site(kappa.value(), eps0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_with_tagged_family() {
        let text = r#"{"family":"ring_with_hop","n_half":6,"l0":1,"r":1,"kappa":0.5}"#;
        let spec: ModelSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.family_name(), "ring_with_hop");
        assert_eq!(spec.kappa(), Some(Complex64::new(0.5, 0.0)));
        let model = spec.build().unwrap();
        assert_eq!(model.dim(), 12);
        let back = serde_json::to_string(&spec).unwrap();
        let again: ModelSpec = serde_json::from_str(&back).unwrap();
        assert_eq!(spec, again);
    }

    #[test]
    fn complex_kappa_as_pair_and_unknown_keys_rejected() {
        let text = r#"{"family":"two_site","kappa":[0.0,1.5],"eps0":0.3}"#;
        let spec: ModelSpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec.kappa(), Some(Complex64::new(0.0, 1.5)));

        let bad = r#"{"family":"ring","n_half":4,"extra":1}"#;
        assert!(serde_json::from_str::<ModelSpec>(bad).is_err());
    }

    #[test]
    fn row_coupling_defaults_to_uniform() {
        let text = r#"{"family":"ssh_cylinder","m_rows":4,"n_cells":4,"delta":0.1,"j_inter":1.0,"kappa":0.5}"#;
        let spec: ModelSpec = serde_json::from_str(text).unwrap();
        match spec {
            ModelSpec::SshCylinder { row_coupling, .. } => {
                assert_eq!(row_coupling, RowCoupling::Uniform)
            }
            _ => panic!("wrong family"),
        }
    }

    #[test]
    fn kappa_sweep_replacement_rules() {
        let spec = ModelSpec::SshChain { n_cells: 8, delta: 0.3, kappa: 0.1.into() };
        let swept = spec.with_kappa(Complex64::new(2.0, 0.0)).unwrap();
        assert_eq!(swept.kappa(), Some(Complex64::new(2.0, 0.0)));
        let ring = ModelSpec::Ring { n_half: 4 };
        assert!(ring.with_kappa(Complex64::new(1.0, 0.0)).is_err());
        let ladder = ModelSpec::Ladder { n_rungs: 8, j: 1.0, n_max: 2 };
        assert!(ladder.with_kappa(Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn every_family_builds_with_hermitian_h0() {
        let specs = [
            ModelSpec::Ring { n_half: 6 },
            ModelSpec::RingWithHop { n_half: 6, l0: 1, r: 3, kappa: 0.5.into() },
            ModelSpec::KspaceRing { n_sites: 8, kappa: 1.0.into() },
            ModelSpec::Ladder { n_rungs: 6, j: 0.7, n_max: 3 },
            ModelSpec::SshChain { n_cells: 5, delta: 0.3, kappa: 0.2.into() },
            ModelSpec::SshCylinder {
                m_rows: 4,
                n_cells: 3,
                delta: 0.5,
                j_inter: 1.0,
                kappa: 0.5.into(),
                row_coupling: RowCoupling::Staggered,
            },
            ModelSpec::TwoSite { kappa: 0.5.into(), eps0: 0.3 },
        ];
        for spec in specs {
            let model = spec.build().unwrap_or_else(|e| panic!("{}: {e}", spec.family_name()));
            assert!(model.h0_dense().is_hermitian(), "{} H0 not Hermitian", spec.family_name());
            assert_eq!(model.dim(), model.site_map.dim());
        }
    }
}
