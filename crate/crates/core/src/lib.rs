//! Fermion masses from spontaneously broken gauge theories and the
//! Dirac-Yukawa operators they define.
//!
//! The pipeline: a Higgs representation and potential ([`higgs_vacuum`])
//! give a vacuum `z0` and its isotropy algebra ([`group_rep`]); a Yukawa
//! map evaluated at `z0` gives the odd section `𝒟` and the mass matrix
//! ([`yukawa_mass`]); [`lattice_dirac`] realizes `γ^a ∂_a + γ5 ⊗ 𝒟` and
//! related operators on a flat torus.

pub mod clifford;
pub mod commands;
pub mod config;
pub mod error;
pub mod group_rep;
pub mod higgs_vacuum;
pub mod lattice_dirac;
pub mod linalg;
pub mod models;
pub mod report;
pub mod tolerances;
pub mod yukawa_mass;

pub use error::{Error, Result};
pub use tolerances::Tolerances;
