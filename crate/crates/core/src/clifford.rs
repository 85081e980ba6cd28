//! Gamma matrices for even-dimensional Clifford algebras.
//!
//! The euclidean representation is built recursively from the Pauli pair
//! `{σ1, σ2}`: given generators `γ_a` and chirality `Γ` in dimension `2n`,
//! dimension `2n + 2` uses `{γ_a ⊗ σ1, Γ ⊗ σ1, 1 ⊗ σ2}`. All euclidean
//! generators are Hermitian. The chirality is fixed as
//! `γ5 = (-i)^n γ_1 ⋯ γ_{2n}`, which is Hermitian and squares to one.
//!
//! Lorentzian generators are `γ_0 = γ^E_1`, `γ_k = i γ^E_{k+1}` with metric
//! `diag(+1, -1, …, -1)`; they share the euclidean chirality.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{anticommutator, c, identity, kron, max_abs, CMat, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    Euclidean,
    Lorentzian,
}

#[derive(Debug, Clone)]
pub struct CliffordAlgebra {
    n: usize,
    signature: Signature,
    gamma: Vec<CMat>,
    gamma5: CMat,
    xi_scale: f64,
}

/// Residuals of the defining identities; all should vanish.
#[derive(Debug, Clone, Serialize)]
pub struct CliffordCheck {
    pub n: usize,
    pub signature: Signature,
    pub anticommutator: f64,
    pub gamma5_square: f64,
    pub gamma5_anticommutes: f64,
    pub traces: f64,
    pub right_inverse: f64,
    pub hermiticity: f64,
}

impl CliffordCheck {
    pub fn max_residual(&self) -> f64 {
        [
            self.anticommutator,
            self.gamma5_square,
            self.gamma5_anticommutes,
            self.traces,
            self.right_inverse,
            self.hermiticity,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn pauli() -> [CMat; 3] {
    [
        CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        CMat::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        CMat::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

fn euclidean_gammas(n: usize) -> (Vec<CMat>, CMat) {
    let [s1, s2, _] = pauli();
    let mut gamma = vec![s1.clone(), s2.clone()];
    let mut chirality = chirality_of(&gamma, 1);
    for k in 2..=n {
        let dim = gamma[0].nrows();
        let mut next: Vec<CMat> = gamma.iter().map(|g| kron(g, &s1)).collect();
        next.push(kron(&chirality, &s1));
        next.push(kron(&identity(dim), &s2));
        gamma = next;
        chirality = chirality_of(&gamma, k);
    }
    (gamma, chirality)
}

/// `(-i)^n γ_1 ⋯ γ_{2n}`.
fn chirality_of(gamma: &[CMat], n: usize) -> CMat {
    let dim = gamma[0].nrows();
    let product = gamma.iter().fold(identity(dim), |acc, g| acc * g);
    let phase = (0..n).fold(ONE, |p, _| p * (-I));
    product * phase
}

/// Build the gamma matrices of the Clifford algebra in dimension `2n`.
pub fn build_clifford(n: usize, signature: Signature) -> Result<CliffordAlgebra> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "Clifford algebra half-dimension must be at least 1".into(),
        ));
    }
    let (euclid, gamma5) = euclidean_gammas(n);
    let gamma = match signature {
        Signature::Euclidean => euclid,
        Signature::Lorentzian => euclid
            .into_iter()
            .enumerate()
            .map(|(a, g)| if a == 0 { g } else { g * I })
            .collect(),
    };
    Ok(CliffordAlgebra {
        n,
        signature,
        gamma,
        gamma5,
        xi_scale: 1.0 / (2 * n) as f64,
    })
}

impl CliffordAlgebra {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Spacetime dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Size `2^n` of the spinor module.
    pub fn spinor_dim(&self) -> usize {
        1 << self.n
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// Lower-index generators `γ_a`.
    pub fn gamma(&self) -> &[CMat] {
        &self.gamma
    }

    pub fn gamma5(&self) -> &CMat {
        &self.gamma5
    }

    pub fn xi_scale(&self) -> f64 {
        self.xi_scale
    }

    /// Diagonal metric entry `g_aa` (equal to `g^aa`).
    pub fn metric(&self, a: usize) -> f64 {
        match (self.signature, a) {
            (Signature::Euclidean, _) | (Signature::Lorentzian, 0) => 1.0,
            (Signature::Lorentzian, _) => -1.0,
        }
    }

    /// Raised-index generator `γ^a = g^{ab} γ_b`.
    pub fn gamma_upper(&self, a: usize) -> CMat {
        &self.gamma[a] * c(self.metric(a), 0.0)
    }

    /// Residuals of every defining identity.
    pub fn check(&self) -> CliffordCheck {
        let d = self.spinor_dim();
        let id = identity(d);
        let mut anti = 0.0f64;
        for a in 0..self.dim() {
            for b in 0..self.dim() {
                let expected = if a == b {
                    &id * c(2.0 * self.metric(a), 0.0)
                } else {
                    CMat::zeros(d, d)
                };
                anti = anti.max(max_abs(&(anticommutator(&self.gamma[a], &self.gamma[b]) - expected)));
            }
        }
        let g5_sq = max_abs(&(&self.gamma5 * &self.gamma5 - &id));
        let g5_anti = self
            .gamma
            .iter()
            .map(|g| max_abs(&anticommutator(&self.gamma5, g)))
            .fold(0.0, f64::max);
        let traces = self
            .gamma
            .iter()
            .chain(std::iter::once(&self.gamma5))
            .map(|g| g.trace().norm())
            .fold(0.0, f64::max);
        let xi = canonical_xi(self);
        let contraction = (0..self.dim()).fold(CMat::zeros(d, d), |acc, a| acc + self.gamma_upper(a) * &xi[a]);
        let right_inverse = max_abs(&(contraction - &id));
        let hermiticity = self
            .gamma
            .iter()
            .enumerate()
            .map(|(a, g)| {
                // Hermitian where g_aa = +1, anti-Hermitian where g_aa = -1.
                max_abs(&(g.adjoint() - g * c(self.metric(a), 0.0)))
            })
            .chain(std::iter::once(max_abs(&(self.gamma5.adjoint() - &self.gamma5))))
            .fold(0.0, f64::max);
        CliffordCheck {
            n: self.n,
            signature: self.signature,
            anticommutator: anti,
            gamma5_square: g5_sq,
            gamma5_anticommutes: g5_anti,
            traces,
            right_inverse,
            hermiticity,
        }
    }
}

/// `(Σ_a covector_a γ^a) · spinor_block`.
pub fn clifford_action(cl: &CliffordAlgebra, covector: &[f64], spinor_block: &CMat) -> Result<CMat> {
    if covector.len() != cl.dim() {
        return Err(Error::dim("clifford_action covector", cl.dim(), covector.len()));
    }
    if spinor_block.nrows() != cl.spinor_dim() {
        return Err(Error::dim("clifford_action spinor block rows", cl.spinor_dim(), spinor_block.nrows()));
    }
    let d = cl.spinor_dim();
    let action = covector
        .iter()
        .enumerate()
        .fold(CMat::zeros(d, d), |acc, (a, &w)| acc + cl.gamma_upper(a) * c(w, 0.0));
    Ok(action * spinor_block)
}

/// Components `ξ_a = γ_a / (2n)` of the canonical one-form; `Σ γ^a ξ_a = 1`.
pub fn canonical_xi(cl: &CliffordAlgebra) -> Vec<CMat> {
    cl.gamma.iter().map(|g| g * c(cl.xi_scale, 0.0)).collect()
}
