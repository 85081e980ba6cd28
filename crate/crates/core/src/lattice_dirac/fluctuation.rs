use super::{LatticeOperator, Symmetry};
use crate::clifford::CliffordAlgebra;
use crate::error::{Error, Result};
use crate::higgs_vacuum::{unitary_gauge_project, GoldstoneSplit};
use crate::linalg::{c, identity, kron, max_abs, unitarity_residual, CMat, CVec};
use crate::yukawa_mass::{apply_yukawa, ChiralFermionRep, YukawaMap};

/// Lie-algebra valued one-form on the sites: `coeffs[site][axis]` are
/// coefficients over the generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeField {
    pub coeffs: Vec<Vec<Vec<f64>>>,
}

impl GaugeField {
    pub fn zeros(sites: usize, axes: usize, dim_g: usize) -> Self {
        GaugeField {
            coeffs: vec![vec![vec![0.0; dim_g]; axes]; sites],
        }
    }

    pub fn constant(sites: usize, per_axis: Vec<Vec<f64>>) -> Self {
        GaugeField {
            coeffs: vec![per_axis; sites],
        }
    }
}

/// Higgs fluctuation, one `N_H` vector per site.
#[derive(Debug, Clone, PartialEq)]
pub struct HiggsField {
    pub values: Vec<CVec>,
}

impl HiggsField {
    pub fn zeros(sites: usize, n_h: usize) -> Self {
        HiggsField {
            values: vec![CVec::zeros(n_h); sites],
        }
    }

    pub fn constant(sites: usize, phi: CVec) -> Self {
        HiggsField {
            values: vec![phi; sites],
        }
    }
}

#[derive(Debug, Clone)]
pub struct FluctuationInput {
    pub gauge: GaugeField,
    pub higgs: HiggsField,
    /// When set, each Higgs value is projected onto the physical directions.
    pub unitary_gauge: Option<GoldstoneSplit>,
}

/// `D_t = vac_op + t Σ_s P_s ⊗ (Σ_a γ^a ⊗ ρ_F(A_a(s)) + γ5 ⊗ G_Y(φ(s)))`.
pub fn fluctuation_operator(
    vac_op: &LatticeOperator,
    input: &FluctuationInput,
    y: &YukawaMap,
    cl: &CliffordAlgebra,
    frep: &ChiralFermionRep,
    t: f64,
) -> Result<LatticeOperator> {
    let (ns, nsp, nf) = vac_op.dims();
    if nsp != cl.spinor_dim() {
        return Err(Error::dim("spinor factor", cl.spinor_dim(), nsp));
    }
    if nf != frep.n_f() {
        return Err(Error::dim("internal factor", frep.n_f(), nf));
    }
    if input.gauge.coeffs.len() != ns {
        return Err(Error::dim("gauge field sites", ns, input.gauge.coeffs.len()));
    }
    if input.higgs.values.len() != ns {
        return Err(Error::dim("Higgs field sites", ns, input.higgs.values.len()));
    }
    if t == 0.0 {
        return Ok(vac_op.clone().with_source(format!("{}|t=0", vac_op.meta.source)));
    }
    let f = nsp * nf;
    let mut m = vac_op.matrix.clone();
    for s in 0..ns {
        let axes = &input.gauge.coeffs[s];
        if axes.len() != cl.dim() {
            return Err(Error::dim("gauge field directions", cl.dim(), axes.len()));
        }
        let phi = match &input.unitary_gauge {
            Some(split) => unitary_gauge_project(split, &input.higgs.values[s])?,
            None => input.higgs.values[s].clone(),
        };
        let mut block = kron(cl.gamma5(), &apply_yukawa(y, &phi)?);
        for (a, co) in axes.iter().enumerate() {
            block += kron(&cl.gamma_upper(a), &frep.total.element(co)?);
        }
        let mut view = m.view_mut((s * f, s * f), (f, f));
        view += block * c(t, 0.0);
    }
    let op = LatticeOperator::new(m, (ns, nsp, nf), "fluctuation", Symmetry::AntiHermitian)?;
    Ok(op.with_source(format!("{}|t={t}", vac_op.meta.source)))
}

/// `U op U†` with `U = ⊕_s (1_spinor ⊗ u_s)`.
pub fn gauge_transform(op: &LatticeOperator, u_site: &[CMat], unitarity_tol: f64) -> Result<LatticeOperator> {
    let (ns, nsp, nf) = op.dims();
    if u_site.len() != ns {
        return Err(Error::dim("gauge transformation sites", ns, u_site.len()));
    }
    let f = nsp * nf;
    let mut u = CMat::zeros(ns * f, ns * f);
    for (s, us) in u_site.iter().enumerate() {
        if us.nrows() != nf || us.ncols() != nf {
            return Err(Error::dim("gauge transformation size", nf, us.nrows()));
        }
        let r = unitarity_residual(us);
        if r > unitarity_tol {
            return Err(Error::NonUnitary { residual: r });
        }
        u.view_mut((s * f, s * f), (f, f)).copy_from(&kron(&identity(nsp), us));
    }
    let m = &u * &op.matrix * u.adjoint();
    let mut out = LatticeOperator::new(m, op.dims(), format!("{}|gauge", op.meta.kind), op.meta.symmetry)?;
    out.meta.source = op.meta.source.clone();
    Ok(out)
}

/// Largest entry of `[op, f ⊗ 1]` for a site function `f`.
pub fn site_commutator(op: &LatticeOperator, f: &[f64]) -> Result<f64> {
    let (ns, nsp, nf) = op.dims();
    if f.len() != ns {
        return Err(Error::dim("site function", ns, f.len()));
    }
    let d = CMat::from_diagonal(&CVec::from_iterator(ns, f.iter().map(|x| c(*x, 0.0))));
    let mult = kron(&d, &identity(nsp * nf));
    Ok(max_abs(&(&op.matrix * &mult - &mult * &op.matrix)))
}
