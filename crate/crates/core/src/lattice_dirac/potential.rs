use serde::Serialize;

use super::{LatticeOperator, Symmetry, TorusLattice};
use crate::clifford::CliffordAlgebra;
use crate::error::{Error, Result};
use crate::linalg::{anticommutator, c, identity, kron, max_abs, CMat, I};
use crate::yukawa_mass::MassData;

/// Connection `∇^D_a = ½ {γ_a, D}` read off a Dirac-type operator.
///
/// For `D = Σ γ^a ∇_a + Ψ` with `∇_a` commuting with the (site-constant)
/// gamma matrices and `Ψ` anticommuting with them, this returns `∇_a`.
pub fn bochner_connection(d: &LatticeOperator, cl: &CliffordAlgebra) -> Result<Vec<LatticeOperator>> {
    let (ns, nsp, nf) = d.dims();
    if nsp != cl.spinor_dim() {
        return Err(Error::dim("spinor factor", cl.spinor_dim(), nsp));
    }
    (0..cl.dim())
        .map(|a| {
            let g = kron(&kron(&identity(ns), &cl.gamma()[a]), &identity(nf));
            let m = anticommutator(&g, &d.matrix) * c(0.5, 0.0);
            LatticeOperator::new(m, (ns, nsp, nf), format!("bochner_connection[{a}]"), Symmetry::None)
        })
        .collect()
}

/// `Δ = -Σ_a ∇_a ∇_a`.
pub fn bochner_laplacian(conn: &[LatticeOperator]) -> Result<LatticeOperator> {
    let first = conn.first().ok_or_else(|| Error::InvalidArgument("empty connection".into()))?;
    let dims = first.dims();
    let n = first.matrix.nrows();
    let mut lap = CMat::zeros(n, n);
    for comp in conn {
        if comp.dims() != dims {
            return Err(Error::dim("connection component size", n, comp.matrix.nrows()));
        }
        lap -= &comp.matrix * &comp.matrix;
    }
    LatticeOperator::new(lap, dims, "bochner_laplacian", Symmetry::None)
}

#[derive(Debug, Clone)]
pub struct DiracPotential {
    pub op: LatticeOperator,
    /// Largest entry coupling distinct sites.
    pub leakage: f64,
    /// Largest deviation of any site block from the block at site 0.
    pub site_constancy: f64,
    /// Fiber block at site 0.
    pub block: CMat,
}

/// `V_D = (i·D)² - Δ`, required to act pointwise.
pub fn dirac_potential(d: &LatticeOperator, laplacian: &LatticeOperator, leak_tol: f64) -> Result<DiracPotential> {
    if d.dims() != laplacian.dims() {
        return Err(Error::dim("Dirac operator vs Laplacian size", d.matrix.nrows(), laplacian.matrix.nrows()));
    }
    let id = &d.matrix * I;
    let v = &id * &id - &laplacian.matrix;
    let op = LatticeOperator::new(v, d.dims(), "dirac_potential", Symmetry::None)?;
    let leakage = op.off_site_leakage();
    if leakage.is_nan() || leakage > leak_tol {
        return Err(Error::NotMultiplicationOperator { leakage });
    }
    let block = op.site_block(0, 0);
    let site_constancy = (1..op.sites)
        .map(|s| max_abs(&(op.site_block(s, s) - &block)))
        .fold(0.0, f64::max);
    Ok(DiracPotential {
        op,
        leakage,
        site_constancy,
        block,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct LagrangianDensity {
    pub per_site_trace: f64,
    /// Fiber trace restricted to spinor ⊗ left and spinor ⊗ right.
    pub left_trace: f64,
    pub right_trace: f64,
    pub volume_element: f64,
    pub density: f64,
    /// Scalar curvature of the base; the torus is flat.
    pub scalar_curvature: f64,
    pub note: String,
}

pub fn lagrangian_density(vd: &DiracPotential, lat: &TorusLattice, n_l: usize) -> Result<LagrangianDensity> {
    let nf = vd.op.internal_dim;
    if n_l > nf {
        return Err(Error::dim("left dimension", nf, n_l));
    }
    let mut left = 0.0;
    let mut right = 0.0;
    for s in 0..vd.op.spinor_dim {
        for f in 0..nf {
            let x = vd.block[(s * nf + f, s * nf + f)].re;
            if f < n_l {
                left += x;
            } else {
                right += x;
            }
        }
    }
    let per_site_trace = vd.block.trace().re;
    Ok(LagrangianDensity {
        per_site_trace,
        left_trace: left,
        right_trace: right,
        volume_element: lat.spacing.powi(lat.axes() as i32),
        density: per_site_trace,
        scalar_curvature: 0.0,
        note: "flat torus: density = tr(m_F^2); on a curved base the trace gains r_M/4 per fiber dimension, \
               which this lattice does not model"
            .into(),
    })
}

/// `(1/N_F) Σ m_k²`.
pub fn mean_mass(md: &MassData) -> f64 {
    if md.spectrum_sq.is_empty() {
        return 0.0;
    }
    md.spectrum_sq.iter().sum::<f64>() / md.spectrum_sq.len() as f64
}
