use serde::Serialize;

use super::{LatticeOperator, TorusLattice, WilsonLine};
use crate::error::{Error, Result};
use crate::linalg::{c, hermitian_eigen, hermitian_residual, identity, kron, max_abs, CMat, CVec, I};
use crate::yukawa_mass::{ChiralFermionRep, MassData};

/// Sorted eigenvalues of `i·op`, or of `(i·op)²` when `square_first`.
pub fn spectrum(op: &LatticeOperator, square_first: bool, herm_tol: f64) -> Result<Vec<f64>> {
    let h = &op.matrix * I;
    let scale = max_abs(&h).max(1.0);
    let r = hermitian_residual(&h);
    if r > herm_tol * scale {
        return Err(Error::NonHermitian { residual: r });
    }
    let h = (&h + h.adjoint()) * c(0.5, 0.0);
    let target = if square_first { &h * &h } else { h };
    let (mut vals, _) = hermitian_eigen(&target);
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Every lattice momentum tuple, in site order.
pub fn lattice_momenta(lat: &TorusLattice) -> Vec<Vec<f64>> {
    let ks = lat.axis_momenta();
    (0..lat.num_sites())
        .map(|s| lat.coords(s).into_iter().map(|j| ks[j]).collect())
        .collect()
}

/// Internal eigenbranch of the vacuum mass matrix together with its charges
/// under a flat Wilson line.
#[derive(Debug, Clone, Serialize)]
pub struct Branch {
    pub m2: f64,
    /// Per direction, eigenvalue of `-i ρ_F(A_a)` on this branch.
    pub charges: Vec<f64>,
    #[serde(skip)]
    pub vector: CVec,
}

/// Joint eigenbasis of `m_F² = -𝒟²` and the `-i ρ_F(A_a)`.
///
/// The matrices commute; a generic real combination has simple spectrum
/// on each joint eigenspace, so its eigenvectors diagonalize all of them.
/// Returns the branches and the worst joint-eigenvector residual.
pub fn branch_decomposition(
    md: &MassData,
    frep: &ChiralFermionRep,
    wl: Option<&WilsonLine>,
    axes: usize,
) -> Result<(Vec<Branch>, f64)> {
    let nf = md.n_f();
    let m2 = md.mass_squared();
    let charges: Vec<CMat> = match wl {
        Some(w) => w
            .internal_matrices(frep, axes, 1e-12)?
            .into_iter()
            .map(|a| a * -I)
            .collect(),
        None => vec![CMat::zeros(nf, nf); axes],
    };
    let weights = [0.754_877_666_2, 0.569_840_290_9, 0.438_283_133_9, 0.347_296_355_3, 0.281_077_917_0, 0.228_365_892_7];
    let mut generic = m2.clone();
    for (a, q) in charges.iter().enumerate() {
        generic += q * c(weights[a % weights.len()] / (1 + a / weights.len()) as f64, 0.0);
    }
    let (_, vecs) = hermitian_eigen(&generic);
    let mut residual = 0.0f64;
    let mut out = Vec::with_capacity(nf);
    for j in 0..nf {
        let v = vecs.column(j).into_owned();
        let rayleigh = |m: &CMat| -> (f64, f64) {
            let mv = m * &v;
            let lam = v.dotc(&mv).re;
            (lam, (mv - &v * c(lam, 0.0)).norm())
        };
        let (mm, r) = rayleigh(&m2);
        residual = residual.max(r);
        let mut qs = Vec::with_capacity(axes);
        for q in &charges {
            let (lam, r) = rayleigh(q);
            residual = residual.max(r);
            qs.push(lam);
        }
        out.push(Branch {
            m2: mm,
            charges: qs,
            vector: v,
        });
    }
    Ok((out, residual))
}

/// Closed-form eigenvalues of `(i∂̸_𝒟)²` on the branches given:
/// `Σ_a (κ(k_a) + q_a)² + m²`, repeated `spinor_dim` times per momentum and branch.
pub fn expected_dirac_spectrum(lat: &TorusLattice, branches: &[Branch], spinor_dim: usize) -> Vec<f64> {
    let moms = lattice_momenta(lat);
    let mut out = Vec::with_capacity(moms.len() * branches.len() * spinor_dim);
    for k in &moms {
        for b in branches {
            let p2: f64 = k
                .iter()
                .enumerate()
                .map(|(a, ka)| {
                    let p = lat.dispersion(*ka) + b.charges.get(a).copied().unwrap_or(0.0);
                    p * p
                })
                .sum();
            out.extend(std::iter::repeat_n(p2 + b.m2, spinor_dim));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[derive(Debug, Clone)]
pub struct RestrictedOperator {
    pub op: LatticeOperator,
    /// `|op W - W (W† op W)|`, zero iff the subspace is invariant.
    pub leakage: f64,
}

/// Compress `op` onto `sites ⊗ spinor ⊗ span(basis)` for an orthonormal
/// internal basis (columns).
pub fn restrict_to_internal(op: &LatticeOperator, basis: &CMat) -> Result<RestrictedOperator> {
    let (ns, nsp, nf) = op.dims();
    if basis.nrows() != nf {
        return Err(Error::dim("internal basis rows", nf, basis.nrows()));
    }
    let w = kron(&identity(ns * nsp), basis);
    let ow = &op.matrix * &w;
    let compressed = w.adjoint() * &ow;
    let leakage = max_abs(&(ow - &w * &compressed));
    let sym = op.meta.symmetry;
    let restricted = LatticeOperator::new(compressed, (ns, nsp, basis.ncols()), format!("{}|branch", op.meta.kind), sym)?;
    Ok(RestrictedOperator {
        op: restricted,
        leakage,
    })
}

/// Branches with equal mass and charges (to `tol`), each with an
/// orthonormal internal basis. Each group is invariant under `𝒟`.
pub fn group_branches(branches: &[Branch], tol: f64) -> Vec<(Branch, CMat)> {
    let mut groups: Vec<(Branch, Vec<CVec>)> = Vec::new();
    for b in branches {
        let close = |g: &Branch| {
            (g.m2 - b.m2).abs() <= tol && g.charges.iter().zip(&b.charges).all(|(x, y)| (x - y).abs() <= tol)
        };
        match groups.iter_mut().find(|(g, _)| close(g)) {
            Some((_, vs)) => vs.push(b.vector.clone()),
            None => groups.push((b.clone(), vec![b.vector.clone()])),
        }
    }
    groups
        .into_iter()
        .map(|(b, vs)| (b, CMat::from_columns(&vs)))
        .collect()
}
