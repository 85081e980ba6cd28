//! Unitary Lie algebra representations given by anti-Hermitian generators.
//!
//! Algebra elements are real coefficient vectors over a fixed generator
//! list. Reductive algebras such as `su(2) ⊕ u(1)` are allowed.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    anti_hermitian_residual, c, commutator, hermitian_eigen, max_abs, real_null_space, CMat, CVec, RMat, RVec,
};

#[derive(Debug, Clone, PartialEq)]
pub struct LieAlgebraRep {
    pub label: String,
    generators: Vec<CMat>,
    rep_dim: usize,
}

/// Basis of an isotropy subalgebra, orthonormal in coefficient space.
#[derive(Debug, Clone, Serialize)]
pub struct IsotropyResult {
    pub basis: Vec<Vec<f64>>,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RepCheck {
    /// Largest `|X + X†|` and the index of the offending generator.
    pub anti_hermitian: f64,
    pub worst_generator: Option<usize>,
    pub closure: f64,
}

impl LieAlgebraRep {
    /// Wrap a generator list. Checks shapes only; see [`LieAlgebraRep::check`].
    pub fn new(label: impl Into<String>, generators: Vec<CMat>, rep_dim: usize) -> Result<Self> {
        for g in &generators {
            if g.nrows() != rep_dim || g.ncols() != rep_dim {
                return Err(Error::dim("generator size", rep_dim, g.nrows().max(g.ncols())));
            }
        }
        Ok(LieAlgebraRep {
            label: label.into(),
            generators,
            rep_dim,
        })
    }

    /// The trivial representation of dimension `rep_dim`.
    pub fn trivial(label: impl Into<String>, dim_g: usize, rep_dim: usize) -> Self {
        LieAlgebraRep {
            label: label.into(),
            generators: vec![CMat::zeros(rep_dim, rep_dim); dim_g],
            rep_dim,
        }
    }

    pub fn dim_g(&self) -> usize {
        self.generators.len()
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    pub fn generators(&self) -> &[CMat] {
        &self.generators
    }

    /// `Σ coeffs_i X_i`.
    pub fn element(&self, coeffs: &[f64]) -> Result<CMat> {
        if coeffs.len() != self.dim_g() {
            return Err(Error::dim("algebra coefficients", self.dim_g(), coeffs.len()));
        }
        Ok(self
            .generators
            .iter()
            .zip(coeffs)
            .fold(CMat::zeros(self.rep_dim, self.rep_dim), |acc, (g, &w)| acc + g * c(w, 0.0)))
    }

    /// Anti-Hermiticity of every generator and closure of the bracket.
    pub fn check(&self) -> RepCheck {
        let (anti_hermitian, worst_generator) = self
            .generators
            .iter()
            .map(anti_hermitian_residual)
            .enumerate()
            .fold((0.0, None), |(best, idx), (i, r)| if r > best { (r, Some(i)) } else { (best, idx) });
        RepCheck {
            anti_hermitian,
            worst_generator,
            closure: self.closure_residual(),
        }
    }

    /// Largest least-squares residual of `[X_i, X_j]` against the real span of
    /// the generators.
    fn closure_residual(&self) -> f64 {
        let k = self.dim_g();
        let d2 = self.rep_dim * self.rep_dim;
        if k == 0 || d2 == 0 {
            return 0.0;
        }
        let mut basis = RMat::zeros(2 * d2, k);
        for (j, g) in self.generators.iter().enumerate() {
            basis.set_column(j, &flatten_real(g));
        }
        let svd = basis.clone().svd(true, true);
        let mut worst = 0.0f64;
        for i in 0..k {
            for j in (i + 1)..k {
                let target = flatten_real(&commutator(&self.generators[i], &self.generators[j]));
                let coeffs = svd.solve(&target, 1e-12).expect("SVD factors requested");
                let resid = (&basis * coeffs - &target).amax();
                worst = worst.max(resid);
            }
        }
        worst
    }
}

fn flatten_real(m: &CMat) -> RVec {
    RVec::from_iterator(2 * m.len(), m.iter().flat_map(|z| [z.re, z.im]))
}

/// Block-diagonal sum of representations of the same algebra.
pub fn direct_sum(label: impl Into<String>, reps: &[&LieAlgebraRep]) -> Result<LieAlgebraRep> {
    let Some(first) = reps.first() else {
        return Err(Error::InvalidArgument("direct_sum needs at least one representation".into()));
    };
    let dim_g = first.dim_g();
    if let Some(bad) = reps.iter().find(|r| r.dim_g() != dim_g) {
        return Err(Error::dim("direct_sum algebra dimension", dim_g, bad.dim_g()));
    }
    let total: usize = reps.iter().map(|r| r.rep_dim()).sum();
    let generators = (0..dim_g)
        .map(|i| {
            let mut m = CMat::zeros(total, total);
            let mut offset = 0;
            for r in reps {
                let d = r.rep_dim();
                m.view_mut((offset, offset), (d, d)).copy_from(&r.generators[i]);
                offset += d;
            }
            m
        })
        .collect();
    LieAlgebraRep::new(label, generators, total)
}

/// `(Σ coeffs_i X_i) z`.
pub fn infinitesimal_action(rep: &LieAlgebraRep, coeffs: &[f64], z: &CVec) -> Result<CVec> {
    if z.len() != rep.rep_dim() {
        return Err(Error::dim("infinitesimal_action vector", rep.rep_dim(), z.len()));
    }
    Ok(rep.element(coeffs)? * z)
}

/// Real `2N × dim_g` matrix whose columns are `realify(X_i z0)`.
pub fn orbit_tangents(rep: &LieAlgebraRep, z0: &CVec) -> RMat {
    let mut m = RMat::zeros(2 * rep.rep_dim(), rep.dim_g());
    for (i, g) in rep.generators().iter().enumerate() {
        m.set_column(i, &crate::linalg::realify(&(g * z0)));
    }
    m
}

/// Subalgebra of elements annihilating `z0`, as an orthonormal basis of
/// coefficient vectors.
pub fn isotropy_algebra(rep: &LieAlgebraRep, z0: &CVec, rel_cut: f64) -> Result<IsotropyResult> {
    if z0.len() != rep.rep_dim() {
        return Err(Error::dim("isotropy_algebra vector", rep.rep_dim(), z0.len()));
    }
    let null = real_null_space(&orbit_tangents(rep, z0), rel_cut);
    let basis: Vec<Vec<f64>> = null.column_iter().map(|col| col.iter().copied().collect()).collect();
    Ok(IsotropyResult {
        dim: basis.len(),
        basis,
    })
}

/// `max_i |[candidate, M_i]|`; zero when `candidate` commutes with all `M_i`.
pub fn commutant_check(matrices: &[CMat], candidate: &CMat) -> Result<f64> {
    if !candidate.is_square() {
        return Err(Error::InvalidArgument("commutant candidate must be square".into()));
    }
    let n = candidate.nrows();
    let mut worst = 0.0f64;
    for m in matrices {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::dim("commutant_check matrix size", n, m.nrows().max(m.ncols())));
        }
        worst = worst.max(max_abs(&commutator(candidate, m)));
    }
    Ok(worst)
}

/// `exp(Σ coeffs_i X_i)` through the spectral decomposition of the Hermitian
/// matrix `i X`. Unitary to rounding for anti-Hermitian generators.
pub fn exp_map(rep: &LieAlgebraRep, coeffs: &[f64]) -> Result<CMat> {
    Ok(exp_anti_hermitian(&rep.element(coeffs)?))
}

/// `exp(X)` for anti-Hermitian `X` (only its anti-Hermitian part is used).
pub fn exp_anti_hermitian(x: &CMat) -> CMat {
    let n = x.nrows();
    if max_abs(x) == 0.0 {
        return crate::linalg::identity(n);
    }
    let h = x * crate::linalg::I;
    let (vals, vecs) = hermitian_eigen(&h);
    let mut scaled = vecs.clone();
    for (j, lam) in vals.iter().enumerate() {
        let phase = c(0.0, -lam).exp();
        for i in 0..n {
            scaled[(i, j)] *= phase;
        }
    }
    scaled * vecs.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::pauli;
    use crate::linalg::{identity, unitarity_residual, I, ONE, ZERO};
    use proptest::prelude::*;

    fn su2_doublet() -> LieAlgebraRep {
        let gens = pauli().iter().map(|s| s * c(0.0, -0.5)).collect();
        LieAlgebraRep::new("su2", gens, 2).unwrap()
    }

    #[test]
    fn doublet_is_valid() {
        let chk = su2_doublet().check();
        assert!(chk.anti_hermitian < 1e-15);
        assert!(chk.closure < 1e-12, "{chk:?}");
    }

    #[test]
    fn non_closed_set_is_detected() {
        // σ1 and σ2 generators alone do not close: [T1, T2] = T3.
        let p = pauli();
        let rep = LieAlgebraRep::new("broken", vec![&p[0] * c(0.0, -0.5), &p[1] * c(0.0, -0.5)], 2).unwrap();
        assert!(rep.check().closure > 0.1);
    }

    #[test]
    fn non_anti_hermitian_generator_is_named() {
        let rep = LieAlgebraRep::new("bad", vec![CMat::zeros(2, 2), pauli()[0].clone()], 2).unwrap();
        let chk = rep.check();
        assert_eq!(chk.worst_generator, Some(1));
        assert!(chk.anti_hermitian > 1.0);
    }

    #[test]
    fn direct_sum_pads_with_trivial() {
        let d = su2_doublet();
        let t = LieAlgebraRep::trivial("1", 3, 1);
        let s = direct_sum("d+1", &[&d, &t]).unwrap();
        assert_eq!(s.rep_dim(), 3);
        for (g, h) in s.generators().iter().zip(d.generators()) {
            assert_eq!(g.view((0, 0), (2, 2)), h.view((0, 0), (2, 2)));
            assert_eq!(g[(2, 2)], ZERO);
            assert_eq!(g[(0, 2)], ZERO);
        }
        let single = direct_sum("d", &[&d]).unwrap();
        assert_eq!(single.generators(), d.generators());
    }

    #[test]
    fn direct_sum_rejects_mismatch() {
        let d = su2_doublet();
        let t = LieAlgebraRep::trivial("1", 4, 1);
        assert!(direct_sum("x", &[&d, &t]).is_err());
        assert!(direct_sum("x", &[]).is_err());
    }

    #[test]
    fn doublet_alone_is_completely_broken() {
        let z0 = CVec::from_vec(vec![ZERO, c(2.0, 0.0)]);
        let iso = isotropy_algebra(&su2_doublet(), &z0, 1e-9).unwrap();
        assert_eq!(iso.dim, 0);
        let origin = isotropy_algebra(&su2_doublet(), &CVec::zeros(2), 1e-9).unwrap();
        assert_eq!(origin.dim, 3);
    }

    #[test]
    fn identity_is_in_every_commutant() {
        let d = su2_doublet();
        assert_eq!(commutant_check(d.generators(), &identity(2)).unwrap(), 0.0);
        assert!(commutant_check(d.generators(), &pauli()[2]).unwrap() > 0.5);
        assert!(commutant_check(d.generators(), &identity(3)).is_err());
    }

    #[test]
    fn exp_of_half_turn_is_minus_i_sigma1() {
        let u = exp_map(&su2_doublet(), &[std::f64::consts::PI, 0.0, 0.0]).unwrap();
        let expected = &pauli()[0] * (-I);
        assert!(max_abs(&(u - expected)) < 1e-14);
        assert_eq!(exp_map(&su2_doublet(), &[0.0; 3]).unwrap(), identity(2));
    }

    #[test]
    fn exp_agrees_with_pade_scaling_and_squaring() {
        let d = su2_doublet();
        let coeffs = [0.7, -1.3, 2.9];
        let x = d.element(&coeffs).unwrap();
        let pade = x.exp();
        assert!(max_abs(&(exp_map(&d, &coeffs).unwrap() - pade)) < 1e-12);
    }

    #[test]
    fn closed_form_pauli_exponential() {
        // exp(-i θ n·σ / 2) = cos(θ/2) - i sin(θ/2) n·σ
        let d = su2_doublet();
        let v = [0.3, -0.4, 1.2];
        let theta: f64 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2];
        let theta = theta.sqrt();
        let p = pauli();
        let nsig = (0..3).fold(CMat::zeros(2, 2), |acc, k| acc + &p[k] * c(v[k] / theta, 0.0));
        let expected = identity(2) * c((theta / 2.0).cos(), 0.0) - nsig * c(0.0, (theta / 2.0).sin());
        assert!(max_abs(&(exp_map(&d, &v).unwrap() - expected)) < 1e-14);
    }

    #[test]
    fn action_dimension_checked() {
        let d = su2_doublet();
        assert!(infinitesimal_action(&d, &[1.0, 0.0, 0.0], &CVec::zeros(3)).is_err());
        assert!(infinitesimal_action(&d, &[1.0, 0.0], &CVec::zeros(2)).is_err());
        let zero = infinitesimal_action(&d, &[0.0; 3], &CVec::from_vec(vec![ONE, ONE])).unwrap();
        assert_eq!(zero, CVec::zeros(2));
    }

    proptest! {
        #[test]
        fn exp_is_unitary_with_inverse(a in -5.0f64..5.0, b in -5.0f64..5.0, cc in -5.0f64..5.0) {
            let d = su2_doublet();
            let u = exp_map(&d, &[a, b, cc]).unwrap();
            let v = exp_map(&d, &[-a, -b, -cc]).unwrap();
            prop_assert!(unitarity_residual(&u) < 1e-10);
            prop_assert!(max_abs(&(&u * &v - identity(2))) < 1e-10);
        }

        #[test]
        fn isotropy_dimension_is_orbit_invariant(a in -3.0f64..3.0, b in -3.0f64..3.0, cc in -3.0f64..3.0,
                                                 re in -2.0f64..2.0, im in -2.0f64..2.0) {
            // u(1) phase on the second slot only: stabilizer dimension changes
            // with z0 but not along an orbit.
            let d = su2_doublet();
            let z0 = CVec::from_vec(vec![c(re, im), ZERO]);
            let u = exp_map(&d, &[a, b, cc]).unwrap();
            let before = isotropy_algebra(&d, &z0, 1e-9).unwrap().dim;
            let after = isotropy_algebra(&d, &(u * &z0), 1e-9).unwrap().dim;
            prop_assert_eq!(before, after);
        }
    }
}
