use super::{site_constant, LatticeOperator, Symmetry};
use crate::clifford::{canonical_xi, CliffordAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{commutator, kron, max_abs};
use crate::yukawa_mass::MassData;

#[derive(Debug, Clone)]
pub struct CurvatureResult {
    /// `(a, b, F_ab)` for `a < b`.
    pub components: Vec<(usize, usize, LatticeOperator)>,
    /// `max_ab |F_ab - (ξ_a ξ_b - ξ_b ξ_a) ⊗ m_F²|`.
    pub residual: f64,
    /// `max_ab |F_ab|`.
    pub max_norm: f64,
}

impl CurvatureResult {
    pub fn is_flat(&self, tol: f64) -> bool {
        self.max_norm <= tol
    }
}

/// `F_ab = [∇_a, ∇_b]` of the given connection, compared with the closed form
/// `m_F² (ξ∧ξ)_ab` of the vacuum connection on a flat base.
pub fn relative_curvature(conn: &[LatticeOperator], cl: &CliffordAlgebra, md: &MassData) -> Result<CurvatureResult> {
    if conn.len() != cl.dim() {
        return Err(Error::dim("connection components", cl.dim(), conn.len()));
    }
    let (ns, nsp, nf) = conn[0].dims();
    if nsp != cl.spinor_dim() || nf != md.n_f() {
        return Err(Error::dim("connection fiber", cl.spinor_dim() * md.n_f(), nsp * nf));
    }
    let xi = canonical_xi(cl);
    let m2 = md.mass_squared();
    let mut components = Vec::new();
    let mut residual = 0.0f64;
    let mut max_norm = 0.0f64;
    for a in 0..cl.dim() {
        for b in (a + 1)..cl.dim() {
            let f = commutator(&conn[a].matrix, &conn[b].matrix);
            let expected = site_constant(ns, &kron(&commutator(&xi[a], &xi[b]), &m2));
            residual = residual.max(max_abs(&(&f - expected)));
            max_norm = max_norm.max(max_abs(&f));
            let op = LatticeOperator::new(f, (ns, nsp, nf), format!("curvature[{a},{b}]"), Symmetry::None)?;
            components.push((a, b, op));
        }
    }
    Ok(CurvatureResult {
        components,
        residual,
        max_norm,
    })
}
