//! Finite realizations of Dirac-type operators on a flat `2n`-torus.
//!
//! Operators act on `C^{sites} ⊗ C^{2^n} ⊗ C^{N_F}` in that factor order;
//! the site index is row-major over the `2n` axes (axis 0 slowest).
//!
//! Sign conventions, used consistently across this module:
//!
//! * euclidean `{γ_a, γ_b} = 2 δ_ab`, all `γ_a` Hermitian;
//! * first-order derivatives are anti-Hermitian, so Dirac operators are
//!   anti-Hermitian and `i·D` is Hermitian;
//! * `D_sq := (i·D)²`, `Δ := -Σ_a ∇_a ∇_a`, `V_D := D_sq - Δ`;
//! * `m_F² := 1_spinor ⊗ (-𝒟²)`, positive semidefinite.

mod curvature;
mod fluctuation;
pub mod io;
mod potential;
mod spectrum;

pub use curvature::{relative_curvature, CurvatureResult};
pub use fluctuation::{fluctuation_operator, gauge_transform, site_commutator, FluctuationInput, GaugeField, HiggsField};
pub use potential::{
    bochner_connection, bochner_laplacian, dirac_potential, lagrangian_density, mean_mass, DiracPotential,
    LagrangianDensity,
};
pub use spectrum::{
    branch_decomposition, expected_dirac_spectrum, group_branches, lattice_momenta, restrict_to_internal, spectrum, Branch,
    RestrictedOperator,
};

use serde::{Deserialize, Serialize};

use crate::clifford::{canonical_xi, CliffordAlgebra, Signature};
use crate::error::{Error, Result};
use crate::group_rep::IsotropyResult;
use crate::linalg::{c, commutator, hermitian_residual, anti_hermitian_residual, identity, kron, max_abs, CMat, I};
use crate::yukawa_mass::{ChiralFermionRep, MassData};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DerivativeKind {
    /// Exact derivative on the discrete Fourier modes `k = 2πj / (L a)`.
    FourierSpectral,
    /// `(ψ(x + a) - ψ(x - a)) / 2a`, dispersion `sin(k a) / a`.
    CentralDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusLattice {
    /// Half-dimension; the torus has `2n` axes.
    pub n: usize,
    /// Sites per axis.
    pub sites: usize,
    pub spacing: f64,
    pub derivative: DerivativeKind,
}

impl TorusLattice {
    pub fn new(n: usize, sites: usize, spacing: f64, derivative: DerivativeKind) -> Result<Self> {
        if n == 0 || sites == 0 {
            return Err(Error::InvalidArgument("lattice needs n >= 1 and at least one site per axis".into()));
        }
        if !(spacing > 0.0 && spacing.is_finite()) {
            return Err(Error::InvalidArgument(format!("lattice spacing must be positive, got {spacing}")));
        }
        Ok(TorusLattice {
            n,
            sites,
            spacing,
            derivative,
        })
    }

    pub fn axes(&self) -> usize {
        2 * self.n
    }

    pub fn num_sites(&self) -> usize {
        self.sites.pow(self.axes() as u32)
    }

    /// Per-axis momenta `2πj / (L a)`, `j = 0..L`.
    pub fn axis_momenta(&self) -> Vec<f64> {
        (0..self.sites)
            .map(|j| 2.0 * std::f64::consts::PI * j as f64 / (self.sites as f64 * self.spacing))
            .collect()
    }

    /// Eigenvalue `κ` with `∂ e^{ikx} = i κ e^{ikx}` for the chosen derivative.
    pub fn dispersion(&self, k: f64) -> f64 {
        match self.derivative {
            DerivativeKind::FourierSpectral => k,
            DerivativeKind::CentralDifference => (k * self.spacing).sin() / self.spacing,
        }
    }

    /// Coordinates of a site index, axis 0 first.
    pub fn coords(&self, mut site: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes()];
        for a in (0..self.axes()).rev() {
            out[a] = site % self.sites;
            site /= self.sites;
        }
        out
    }

    /// One-dimensional derivative matrix on `L` sites.
    pub fn derivative_1d(&self) -> CMat {
        let l = self.sites;
        let a = self.spacing;
        let mut d = CMat::zeros(l, l);
        match self.derivative {
            DerivativeKind::FourierSpectral => {
                let ks = self.axis_momenta();
                for s in 0..l {
                    for t in 0..l {
                        let mut acc = c(0.0, 0.0);
                        for (j, k) in ks.iter().enumerate() {
                            let angle = 2.0 * std::f64::consts::PI * (j * ((s + l - t) % l)) as f64 / l as f64;
                            acc += I * *k * c(angle.cos(), angle.sin());
                        }
                        d[(s, t)] = acc / l as f64;
                    }
                }
            }
            DerivativeKind::CentralDifference => {
                for s in 0..l {
                    d[(s, (s + 1) % l)] += c(0.5 / a, 0.0);
                    d[(s, (s + l - 1) % l)] -= c(0.5 / a, 0.0);
                }
            }
        }
        d
    }

    /// Derivative along `axis` on the full site space.
    pub fn axis_derivative(&self, axis: usize) -> CMat {
        let before = self.sites.pow(axis as u32);
        let after = self.sites.pow((self.axes() - 1 - axis) as u32);
        kron(&kron(&identity(before), &self.derivative_1d()), &identity(after))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    Hermitian,
    AntiHermitian,
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMeta {
    pub kind: String,
    pub source: String,
    pub symmetry: Symmetry,
}

/// Square matrix on `sites ⊗ spinor ⊗ internal`.
#[derive(Debug, Clone)]
pub struct LatticeOperator {
    pub matrix: CMat,
    pub sites: usize,
    pub spinor_dim: usize,
    pub internal_dim: usize,
    pub meta: OperatorMeta,
}

impl LatticeOperator {
    pub fn new(
        matrix: CMat,
        (sites, spinor_dim, internal_dim): (usize, usize, usize),
        kind: impl Into<String>,
        symmetry: Symmetry,
    ) -> Result<Self> {
        let n = sites * spinor_dim * internal_dim;
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::dim("lattice operator size", n, matrix.nrows()));
        }
        Ok(LatticeOperator {
            matrix,
            sites,
            spinor_dim,
            internal_dim,
            meta: OperatorMeta {
                kind: kind.into(),
                source: String::new(),
                symmetry,
            },
        })
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.meta.source = source.into();
        self
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.sites, self.spinor_dim, self.internal_dim)
    }

    pub fn fiber_dim(&self) -> usize {
        self.spinor_dim * self.internal_dim
    }

    /// Entries finite and the declared symmetry holding to `tol` (relative to
    /// the largest entry).
    pub fn validate(&self, tol: f64) -> Result<()> {
        if self.matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidArgument(format!("operator '{}' has non-finite entries", self.meta.kind)));
        }
        let scale = max_abs(&self.matrix).max(1.0);
        match self.meta.symmetry {
            Symmetry::Hermitian => {
                let r = hermitian_residual(&self.matrix);
                if r > tol * scale {
                    return Err(Error::InvalidArgument(format!(
                        "operator '{}' flagged Hermitian but residual is {r:.3e}",
                        self.meta.kind
                    )));
                }
            }
            Symmetry::AntiHermitian => {
                let r = anti_hermitian_residual(&self.matrix);
                if r > tol * scale {
                    return Err(Error::NonHermitian { residual: r });
                }
            }
            Symmetry::None => {}
        }
        Ok(())
    }

    /// The fiber block coupling site `s` to site `t`.
    pub fn site_block(&self, s: usize, t: usize) -> CMat {
        let f = self.fiber_dim();
        self.matrix.view((s * f, t * f), (f, f)).into_owned()
    }

    /// Largest entry outside the site-diagonal blocks.
    pub fn off_site_leakage(&self) -> f64 {
        let f = self.fiber_dim();
        let mut worst = 0.0f64;
        for i in 0..self.matrix.nrows() {
            for j in 0..self.matrix.ncols() {
                if i / f != j / f {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }
}

/// Constant flat connection with values in the isotropy algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct WilsonLine {
    /// Per direction, coefficients over the isotropy basis.
    pub theta: Vec<Vec<f64>>,
    /// Per direction, the same connection as coefficients over the generators.
    pub coefficients: Vec<Vec<f64>>,
}

impl WilsonLine {
    pub fn new(theta: Vec<Vec<f64>>, isotropy: &IsotropyResult) -> Result<Self> {
        let dim_g = isotropy.basis.first().map_or(0, Vec::len);
        let mut coefficients = Vec::with_capacity(theta.len());
        for (a, row) in theta.iter().enumerate() {
            if row.len() != isotropy.dim {
                return Err(Error::Config {
                    location: format!("wilson.theta[{a}]"),
                    message: format!("expected {} isotropy coefficients, found {}", isotropy.dim, row.len()),
                });
            }
            let mut coeffs = vec![0.0; dim_g];
            for (t, b) in row.iter().zip(&isotropy.basis) {
                for (acc, x) in coeffs.iter_mut().zip(b) {
                    *acc += t * x;
                }
            }
            coefficients.push(coeffs);
        }
        Ok(WilsonLine { theta, coefficients })
    }

    /// `ρ_F(A_a)` per direction; fails unless the connection is flat and has
    /// one component per axis.
    pub fn internal_matrices(&self, frep: &ChiralFermionRep, axes: usize, tol: f64) -> Result<Vec<CMat>> {
        if self.coefficients.len() != axes {
            return Err(Error::dim("Wilson line directions", axes, self.coefficients.len()));
        }
        let mats: Vec<CMat> = self
            .coefficients
            .iter()
            .map(|co| frep.total.element(co))
            .collect::<Result<_>>()?;
        for a in 0..axes {
            for b in (a + 1)..axes {
                let f = max_abs(&commutator(&mats[a], &mats[b]));
                if f > tol {
                    return Err(Error::InvalidArgument(format!(
                        "Wilson line is not flat: |[A_{a}, A_{b}]| = {f:.3e}"
                    )));
                }
            }
        }
        Ok(mats)
    }
}

pub(crate) fn check_inputs(lat: &TorusLattice, cl: &CliffordAlgebra, md: &MassData, frep: &ChiralFermionRep) -> Result<()> {
    if cl.signature() != Signature::Euclidean {
        return Err(Error::SignatureMismatch);
    }
    if cl.n() != lat.n {
        return Err(Error::dim("Clifford half-dimension vs lattice", lat.n, cl.n()));
    }
    if md.n_l() != frep.n_l() || md.n_r() != frep.n_r() {
        return Err(Error::dim("mass data vs fermion representation", frep.n_f(), md.n_f()));
    }
    Ok(())
}

fn wilson_terms(lat: &TorusLattice, frep: &ChiralFermionRep, wl: Option<&WilsonLine>) -> Result<Vec<CMat>> {
    match wl {
        Some(w) => w.internal_matrices(frep, lat.axes(), 1e-12),
        None => Ok(vec![CMat::zeros(frep.n_f(), frep.n_f()); lat.axes()]),
    }
}

/// `∂̸_𝒟 = Σ_a γ^a ⊗ (∂_a + ρ_F(A_a)) + γ5 ⊗ 𝒟`.
pub fn build_vacuum_dirac(
    lat: &TorusLattice,
    cl: &CliffordAlgebra,
    md: &MassData,
    frep: &ChiralFermionRep,
    wl: Option<&WilsonLine>,
) -> Result<LatticeOperator> {
    check_inputs(lat, cl, md, frep)?;
    let wilson = wilson_terms(lat, frep, wl)?;
    let (ns, nsp, nf) = (lat.num_sites(), cl.spinor_dim(), frep.n_f());
    let id_s = identity(ns);
    let id_f = identity(nf);
    let mut fiber_zero_order = kron(cl.gamma5(), &md.d_matrix);
    let mut op = CMat::zeros(ns * nsp * nf, ns * nsp * nf);
    for (a, wa) in wilson.iter().enumerate() {
        let ga = cl.gamma_upper(a);
        op += kron(&kron(&lat.axis_derivative(a), &ga), &id_f);
        fiber_zero_order += kron(&ga, wa);
    }
    op += kron(&id_s, &fiber_zero_order);
    LatticeOperator::new(op, (ns, nsp, nf), "vacuum_dirac", Symmetry::AntiHermitian)
}

/// Components `∂_{𝒟,a} = ∂_a + ρ_F(A_a) + ξ_a (γ5 ⊗ 𝒟)` of the canonical
/// connection of the vacuum Dirac-Yukawa operator.
pub fn build_vacuum_connection(
    lat: &TorusLattice,
    cl: &CliffordAlgebra,
    md: &MassData,
    frep: &ChiralFermionRep,
    wl: Option<&WilsonLine>,
) -> Result<Vec<LatticeOperator>> {
    check_inputs(lat, cl, md, frep)?;
    let wilson = wilson_terms(lat, frep, wl)?;
    let xi = canonical_xi(cl);
    let (ns, nsp, nf) = (lat.num_sites(), cl.spinor_dim(), frep.n_f());
    let id_sp = identity(nsp);
    let id_f = identity(nf);
    let id_s = identity(ns);
    (0..lat.axes())
        .map(|a| {
            let fiber = kron(&id_sp, &wilson[a]) + kron(&(&xi[a] * cl.gamma5()), &md.d_matrix);
            let m = kron(&kron(&lat.axis_derivative(a), &id_sp), &id_f) + kron(&id_s, &fiber);
            LatticeOperator::new(m, (ns, nsp, nf), format!("vacuum_connection[{a}]"), Symmetry::None)
        })
        .collect()
}

/// Plain (twisted) derivative components `∂_a + ρ_F(A_a)`.
pub fn build_plain_connection(
    lat: &TorusLattice,
    cl: &CliffordAlgebra,
    frep: &ChiralFermionRep,
    wl: Option<&WilsonLine>,
) -> Result<Vec<LatticeOperator>> {
    if cl.n() != lat.n {
        return Err(Error::dim("Clifford half-dimension vs lattice", lat.n, cl.n()));
    }
    let wilson = wilson_terms(lat, frep, wl)?;
    let (ns, nsp, nf) = (lat.num_sites(), cl.spinor_dim(), frep.n_f());
    (0..lat.axes())
        .map(|a| {
            let m = kron(&kron(&lat.axis_derivative(a), &identity(nsp)), &identity(nf))
                + kron(&identity(ns), &kron(&identity(nsp), &wilson[a]));
            LatticeOperator::new(m, (ns, nsp, nf), format!("plain_connection[{a}]"), Symmetry::AntiHermitian)
        })
        .collect()
}

/// `Σ_a (1 ⊗ γ^a ⊗ 1) · conn_a`.
pub fn contract_with_gamma(cl: &CliffordAlgebra, conn: &[LatticeOperator]) -> Result<CMat> {
    let first = conn.first().ok_or_else(|| Error::InvalidArgument("empty connection".into()))?;
    let (ns, nsp, nf) = first.dims();
    if conn.len() != cl.dim() {
        return Err(Error::dim("connection components", cl.dim(), conn.len()));
    }
    let n = ns * nsp * nf;
    let mut out = CMat::zeros(n, n);
    for (a, comp) in conn.iter().enumerate() {
        let g = kron(&kron(&identity(ns), &cl.gamma_upper(a)), &identity(nf));
        out += g * &comp.matrix;
    }
    Ok(out)
}

/// Site-independent fiber operator `1_sites ⊗ block` for a `spinor ⊗ internal` block.
pub fn site_constant(ns: usize, block: &CMat) -> CMat {
    kron(&identity(ns), block)
}

/// Scale by `i`; Hermitian whenever `op` is anti-Hermitian.
pub fn times_i(m: &CMat) -> CMat {
    m * I
}
