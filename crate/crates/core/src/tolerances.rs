//! Every numeric threshold used by the checks, in one place.
//!
//! Model files may override individual fields under `[tolerances]`; the
//! command line can scale all of them at once with `--tol-scale`.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Anticommutator table, grading and right-inverse identities.
    pub clifford: f64,
    /// `X + X†` for generator matrices.
    pub anti_hermitian: f64,
    /// Least-squares residual of commutators projected onto the generators.
    pub closure: f64,
    /// Relative singular-value cut for null spaces and ranks.
    pub null_space_rel_cut: f64,
    /// `|X z0| / max(1, |z0|)` for isotropy basis elements.
    pub isotropy: f64,
    pub unitarity: f64,
    /// Gradient norm (scaled by `max(1, |V| , |z|)`) at a converged minimum.
    pub gradient: f64,
    /// Hessian restricted to Goldstone directions.
    pub goldstone_hessian: f64,
    /// Relative error of analytic derivatives against finite differences.
    pub finite_difference: f64,
    /// Potential invariance and gauge covariance of minima.
    pub invariance: f64,
    pub commutant: f64,
    pub equivariance: f64,
    pub orbit_spectrum: f64,
    pub reconstruction: f64,
    pub block_structure: f64,
    /// Relative singular-value grouping of degenerate masses.
    pub mass_grouping: f64,
    /// Hermiticity of `i * op` before a lattice eigensolve (relative).
    pub lattice_hermitian: f64,
    pub dispersion: f64,
    pub contraction: f64,
    /// Off-site leakage above which a Dirac potential is rejected.
    pub multiplication_operator: f64,
    /// Off-site leakage accepted as "site diagonal" in reports.
    pub site_leakage: f64,
    pub site_constancy: f64,
    pub trace: f64,
    /// Per-site trace against `2^n · N_F · mean_mass`.
    pub mean_mass_identity: f64,
    pub curvature: f64,
    pub gauge_entrywise: f64,
    pub gauge_spectrum: f64,
    pub wilson_shift: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            clifford: 1e-12,
            anti_hermitian: 1e-12,
            closure: 1e-10,
            null_space_rel_cut: 1e-9,
            isotropy: 1e-10,
            unitarity: 1e-10,
            gradient: 1e-8,
            goldstone_hessian: 1e-7,
            finite_difference: 1e-6,
            invariance: 1e-9,
            commutant: 1e-12,
            equivariance: 1e-12,
            orbit_spectrum: 1e-9,
            reconstruction: 1e-10,
            block_structure: 1e-12,
            mass_grouping: 1e-8,
            lattice_hermitian: 1e-10,
            dispersion: 1e-9,
            contraction: 1e-12,
            multiplication_operator: 1e-8,
            site_leakage: 1e-10,
            site_constancy: 1e-10,
            trace: 1e-9,
            mean_mass_identity: 1e-12,
            curvature: 1e-12,
            gauge_entrywise: 1e-12,
            gauge_spectrum: 1e-10,
            wilson_shift: 1e-9,
        }
    }
}

impl Tolerances {
    /// Multiply every threshold by `factor`. Rank cuts and grouping
    /// thresholds scale too, so large factors loosen rank decisions.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut t = *self;
        for field in t.fields_mut() {
            *field *= factor;
        }
        t
    }

    fn fields_mut(&mut self) -> [&mut f64; 28] {
        [
            &mut self.clifford,
            &mut self.anti_hermitian,
            &mut self.closure,
            &mut self.null_space_rel_cut,
            &mut self.isotropy,
            &mut self.unitarity,
            &mut self.gradient,
            &mut self.goldstone_hessian,
            &mut self.finite_difference,
            &mut self.invariance,
            &mut self.commutant,
            &mut self.equivariance,
            &mut self.orbit_spectrum,
            &mut self.reconstruction,
            &mut self.block_structure,
            &mut self.mass_grouping,
            &mut self.lattice_hermitian,
            &mut self.dispersion,
            &mut self.contraction,
            &mut self.multiplication_operator,
            &mut self.site_leakage,
            &mut self.site_constancy,
            &mut self.trace,
            &mut self.mean_mass_identity,
            &mut self.curvature,
            &mut self.gauge_entrywise,
            &mut self.gauge_spectrum,
            &mut self.wilson_shift,
        ]
    }
}
