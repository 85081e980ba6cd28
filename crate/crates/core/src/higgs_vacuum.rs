//! Higgs potentials that depend on `s = |z|²`, their minima, and the
//! Goldstone / physical split of fluctuations around a minimum.
//!
//! All derivatives are taken in realified coordinates
//! `x = (Re z_1, Im z_1, …)`. For `V = p(s)`:
//!
//! ```text
//! ∇V = 2 p'(s) x
//! H  = 2 p'(s) 1 + 4 p''(s) x xᵀ
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group_rep::{isotropy_algebra, orbit_tangents, IsotropyResult, LieAlgebraRep};
use crate::linalg::{complexify, max_abs_real, real_complement, real_range, realify, symmetric_eigen, CVec, RMat, RVec};
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PotentialKind {
    /// `λ (|z|² - v²)²`
    MexicanHat { lambda: f64, v: f64 },
    /// `Σ_k coefficients[k] · (|z|²)^k`
    CustomPolynomial { coefficients: Vec<f64> },
}

impl PotentialKind {
    /// `(p(s), p'(s), p''(s))`.
    pub fn profile(&self, s: f64) -> (f64, f64, f64) {
        match self {
            PotentialKind::MexicanHat { lambda, v } => {
                let d = s - v * v;
                (lambda * d * d, 2.0 * lambda * d, 2.0 * lambda)
            }
            PotentialKind::CustomPolynomial { coefficients } => {
                let (mut p, mut dp, mut ddp) = (0.0, 0.0, 0.0);
                for &a in coefficients.iter().rev() {
                    ddp = ddp * s + dp * 2.0;
                    dp = dp * s + p;
                    p = p * s + a;
                }
                (p, dp, ddp)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            PotentialKind::MexicanHat { lambda, v } => {
                if !(*lambda > 0.0 && *v > 0.0 && lambda.is_finite() && v.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "mexican_hat needs lambda > 0 and v > 0, got lambda = {lambda}, v = {v}"
                    )));
                }
            }
            PotentialKind::CustomPolynomial { coefficients } => {
                if coefficients.iter().any(|a| !a.is_finite()) {
                    return Err(Error::InvalidArgument("polynomial coefficients must be finite".into()));
                }
                // Bounded below on s >= 0 iff the leading nonzero coefficient
                // is positive (or the polynomial is constant).
                if let Some(lead) = coefficients.iter().skip(1).rev().find(|a| **a != 0.0) {
                    if *lead < 0.0 {
                        return Err(Error::InvalidArgument(format!(
                            "polynomial potential is unbounded below (leading coefficient {lead})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct HiggsModel {
    pub rep: LieAlgebraRep,
    pub potential: PotentialKind,
}

impl HiggsModel {
    pub fn new(rep: LieAlgebraRep, potential: PotentialKind) -> Result<Self> {
        potential.validate()?;
        Ok(HiggsModel { rep, potential })
    }

    fn check_dim(&self, z: &CVec) -> Result<()> {
        if z.len() != self.rep.rep_dim() {
            return Err(Error::dim("Higgs vector", self.rep.rep_dim(), z.len()));
        }
        Ok(())
    }
}

/// Orthonormal real bases (columns) of orbit-tangent and transversal
/// directions at a point.
#[derive(Debug, Clone)]
pub struct GoldstoneSplit {
    pub goldstone: RMat,
    pub physical: RMat,
}

#[derive(Debug, Clone)]
pub struct VacuumSolution {
    pub z0: CVec,
    pub value: f64,
    pub isotropy: IsotropyResult,
    pub split: GoldstoneSplit,
    pub transversal_hessian_eigs: Vec<f64>,
    pub gradient_norm: f64,
    pub iterations: usize,
}

impl VacuumSolution {
    pub fn goldstone_count(&self) -> usize {
        self.split.goldstone.ncols()
    }

    pub fn physical_count(&self) -> usize {
        self.split.physical.ncols()
    }
}

pub fn potential_eval(model: &HiggsModel, z: &CVec) -> Result<f64> {
    model.check_dim(z)?;
    Ok(model.potential.profile(z.norm_squared()).0)
}

/// Realified gradient `2 p'(|z|²) realify(z)`.
pub fn gradient(model: &HiggsModel, z: &CVec) -> Result<RVec> {
    model.check_dim(z)?;
    Ok(gradient_real(&model.potential, &realify(z)))
}

/// Realified Hessian `2 p' 1 + 4 p'' x xᵀ`.
pub fn hessian(model: &HiggsModel, z: &CVec) -> Result<RMat> {
    model.check_dim(z)?;
    Ok(hessian_real(&model.potential, &realify(z)))
}

fn gradient_real(p: &PotentialKind, x: &RVec) -> RVec {
    let (_, dp, _) = p.profile(x.norm_squared());
    x * (2.0 * dp)
}

fn hessian_real(p: &PotentialKind, x: &RVec) -> RMat {
    let (_, dp, ddp) = p.profile(x.norm_squared());
    let n = x.len();
    RMat::identity(n, n) * (2.0 * dp) + x * x.transpose() * (4.0 * ddp)
}

/// Orbit-tangent directions `realify(X z0)` and their orthogonal complement.
pub fn goldstone_split(rep: &LieAlgebraRep, z0: &CVec, rel_cut: f64) -> Result<GoldstoneSplit> {
    if z0.len() != rep.rep_dim() {
        return Err(Error::dim("goldstone_split vector", rep.rep_dim(), z0.len()));
    }
    let goldstone = real_range(&orbit_tangents(rep, z0), rel_cut);
    let physical = real_complement(&goldstone, 2 * rep.rep_dim());
    Ok(GoldstoneSplit { goldstone, physical })
}

/// Orthogonal projection of `phi` onto the physical directions.
pub fn unitary_gauge_project(split: &GoldstoneSplit, phi: &CVec) -> Result<CVec> {
    let d = split.physical.nrows();
    if 2 * phi.len() != d {
        return Err(Error::dim("unitary_gauge_project vector", d / 2, phi.len()));
    }
    let p = &split.physical;
    Ok(complexify(&(p * (p.transpose() * realify(phi)))))
}

const MAX_DESCENT: usize = 10_000;
const MAX_NEWTON: usize = 50;

/// Minimize the potential from `seed`: backtracking gradient descent, then
/// Newton steps restricted to the directions transversal to the orbit.
pub fn minimize(model: &HiggsModel, seed: &CVec, tol: &Tolerances) -> Result<VacuumSolution> {
    model.check_dim(seed)?;
    let p = &model.potential;
    let value = |x: &RVec| p.profile(x.norm_squared()).0;
    let converged = |x: &RVec, g: &RVec| g.norm() <= tol.gradient * x.norm().max(1.0);

    let mut x = realify(seed);
    let mut iterations = 0;
    let mut g = gradient_real(p, &x);

    // Coarse descent until Newton is safe.
    while g.norm() > 1e-3 * x.norm().max(1.0) && iterations < MAX_DESCENT {
        let f0 = value(&x);
        let g2 = g.norm_squared();
        let mut step = 1.0;
        let mut next = &x - &g * step;
        while value(&next) > f0 - 0.5 * step * g2 && step > 1e-16 {
            step *= 0.5;
            next = &x - &g * step;
        }
        x = next;
        g = gradient_real(p, &x);
        iterations += 1;
    }

    let mut newton_steps = 0;
    while !converged(&x, &g) && newton_steps < MAX_NEWTON {
        let split = goldstone_split(&model.rep, &complexify(&x), tol.null_space_rel_cut)?;
        let phys = &split.physical;
        let h = phys.transpose() * hessian_real(p, &x) * phys;
        let gp = phys.transpose() * &g;
        let (vals, vecs) = symmetric_eigen(&h);
        let direction = if vals.first().is_some_and(|&l| l > 0.0) {
            // δ = -P H_p^{-1} Pᵀ g
            let coeffs = vecs.transpose() * &gp;
            let scaled = RVec::from_iterator(coeffs.len(), coeffs.iter().zip(&vals).map(|(c, l)| c / l));
            -(phys * (&vecs * scaled))
        } else {
            -g.clone()
        };
        let f0 = value(&x);
        let mut step = 1.0;
        let mut next = &x + &direction * step;
        while value(&next) > f0 + 1e-12 * f0.abs().max(1.0) && step > 1e-12 {
            step *= 0.5;
            next = &x + &direction * step;
        }
        x = next;
        g = gradient_real(p, &x);
        newton_steps += 1;
        iterations += 1;
    }
    if !converged(&x, &g) {
        return Err(Error::NonConvergence {
            iterations,
            gradient_norm: g.norm(),
        });
    }

    let z0 = complexify(&x);
    let isotropy = isotropy_algebra(&model.rep, &z0, tol.null_space_rel_cut)?;
    let split = goldstone_split(&model.rep, &z0, tol.null_space_rel_cut)?;
    let full_h = hessian_real(p, &x);
    let (eigs, _) = symmetric_eigen(&(split.physical.transpose() * &full_h * &split.physical));
    let scale = max_abs_real(&full_h).max(1.0);
    if let Some(&min) = eigs.first() {
        if min < -tol.goldstone_hessian * scale {
            return Err(Error::SaddleConverged {
                min_eigenvalue: min,
                norm: x.norm(),
            });
        }
        if min <= tol.goldstone_hessian * scale {
            return Err(Error::DegenerateVacuum { min_eigenvalue: min });
        }
    }
    Ok(VacuumSolution {
        value: value(&x),
        gradient_norm: g.norm(),
        z0,
        isotropy,
        split,
        transversal_hessian_eigs: eigs,
        iterations,
    })
}

/// Residuals of the structural claims about a vacuum.
#[derive(Debug, Clone, Serialize)]
pub struct VacuumCheck {
    pub gradient_norm: f64,
    /// `max |Gᵀ H G|` over Goldstone directions.
    pub goldstone_hessian: f64,
    /// `max |Gᵀ P|`.
    pub orthogonality: f64,
    /// `|G Gᵀ + P Pᵀ - 1|`.
    pub completeness: f64,
    pub min_transversal_eig: f64,
    /// `dim_g - isotropy.dim - goldstone count`; zero by rank-nullity.
    pub count_defect: i64,
}

pub fn check_vacuum(model: &HiggsModel, sol: &VacuumSolution) -> Result<VacuumCheck> {
    let x = realify(&sol.z0);
    let h = hessian(model, &sol.z0)?;
    let g = &sol.split.goldstone;
    let p = &sol.split.physical;
    let n = x.len();
    let gh = if g.ncols() > 0 {
        max_abs_real(&(g.transpose() * &h * g))
    } else {
        0.0
    };
    let ortho = if g.ncols() > 0 && p.ncols() > 0 {
        max_abs_real(&(g.transpose() * p))
    } else {
        0.0
    };
    let mut recon = p * p.transpose();
    if g.ncols() > 0 {
        recon += g * g.transpose();
    }
    Ok(VacuumCheck {
        gradient_norm: gradient(model, &sol.z0)?.norm(),
        goldstone_hessian: gh,
        orthogonality: ortho,
        completeness: max_abs_real(&(recon - RMat::identity(n, n))),
        min_transversal_eig: sol.transversal_hessian_eigs.first().copied().unwrap_or(f64::INFINITY),
        count_defect: model.rep.dim_g() as i64 - sol.isotropy.dim as i64 - g.ncols() as i64,
    })
}
