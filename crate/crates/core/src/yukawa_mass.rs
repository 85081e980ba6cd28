//! Yukawa mappings, fermionic mass matrices and their eigenbundle split.
//!
//! A Yukawa map sends a Higgs vector `φ` to the odd anti-Hermitian
//! endomorphism
//!
//! ```text
//! G_Y(φ) = i [[0, M(φ)], [M(φ)†, 0]],    M(φ)_{lr} = Σ_h Y_{lrh} φ_h
//! ```
//!
//! of `C^{N_L} ⊕ C^{N_R}`, with `conj(φ_h)` in place of `φ_h` where the
//! conjugation flag is set. At a vacuum `z0` the mass section is
//! `𝒟 = G_Y(z0)` and `-i𝒟 = [[0, M_F], [M_F†, 0]]` is the mass matrix.
//! The mass spectrum is counted over the full graded fiber: a Dirac fermion
//! of mass `m` contributes `m²` once on the left and once on the right.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_rep::{commutant_check, direct_sum, exp_map, LieAlgebraRep};
use crate::higgs_vacuum::VacuumSolution;
use crate::linalg::{
    anti_hermitian_residual, c, commutator, complex_complement, identity, max_abs, multiset_distance, CMat, CVec, I,
    ONE,
};
use crate::tolerances::Tolerances;

/// Left/right graded fermion representation.
#[derive(Debug, Clone)]
pub struct ChiralFermionRep {
    pub rep_l: LieAlgebraRep,
    pub rep_r: LieAlgebraRep,
    pub total: LieAlgebraRep,
    pub grading: CMat,
}

impl ChiralFermionRep {
    pub fn new(rep_l: LieAlgebraRep, rep_r: LieAlgebraRep) -> Result<Self> {
        let total = direct_sum(format!("{} + {}", rep_l.label, rep_r.label), &[&rep_l, &rep_r])?;
        let (nl, nr) = (rep_l.rep_dim(), rep_r.rep_dim());
        let mut grading = identity(nl + nr);
        for i in nl..nl + nr {
            grading[(i, i)] = -ONE;
        }
        Ok(ChiralFermionRep {
            rep_l,
            rep_r,
            total,
            grading,
        })
    }

    pub fn n_l(&self) -> usize {
        self.rep_l.rep_dim()
    }

    pub fn n_r(&self) -> usize {
        self.rep_r.rep_dim()
    }

    pub fn n_f(&self) -> usize {
        self.n_l() + self.n_r()
    }

    /// `max |[X, grading]|` over the generators of the total representation.
    pub fn evenness_residual(&self) -> f64 {
        commutant_check(self.total.generators(), &self.grading).unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct YukawaMap {
    n_l: usize,
    n_r: usize,
    n_h: usize,
    /// Row-major `(l, r, h)`.
    tensor: Vec<num_complex::Complex64>,
    conjugate: Vec<bool>,
}

impl YukawaMap {
    pub fn zeros(n_l: usize, n_r: usize, n_h: usize) -> Self {
        YukawaMap {
            n_l,
            n_r,
            n_h,
            tensor: vec![num_complex::Complex64::new(0.0, 0.0); n_l * n_r * n_h],
            conjugate: vec![false; n_h],
        }
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.n_l, self.n_r, self.n_h)
    }

    pub fn get(&self, l: usize, r: usize, h: usize) -> num_complex::Complex64 {
        self.tensor[(l * self.n_r + r) * self.n_h + h]
    }

    pub fn set(&mut self, l: usize, r: usize, h: usize, value: num_complex::Complex64) -> Result<()> {
        if l >= self.n_l || r >= self.n_r || h >= self.n_h {
            return Err(Error::InvalidArgument(format!(
                "Yukawa index ({l}, {r}, {h}) outside {}x{}x{}",
                self.n_l, self.n_r, self.n_h
            )));
        }
        self.tensor[(l * self.n_r + r) * self.n_h + h] = value;
        Ok(())
    }

    pub fn conjugate_flags(&self) -> &[bool] {
        &self.conjugate
    }

    pub fn set_conjugate(&mut self, h: usize, flag: bool) -> Result<()> {
        if h >= self.n_h {
            return Err(Error::InvalidArgument(format!("conjugation flag index {h} >= {}", self.n_h)));
        }
        self.conjugate[h] = flag;
        Ok(())
    }

    /// Nonzero entries as `(l, r, h, value)`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, usize, num_complex::Complex64)> + '_ {
        (0..self.n_l).flat_map(move |l| {
            (0..self.n_r).flat_map(move |r| {
                (0..self.n_h).filter_map(move |h| {
                    let v = self.get(l, r, h);
                    (v.norm() != 0.0).then_some((l, r, h, v))
                })
            })
        })
    }

    /// The `N_L × N_R` block `M(φ)`.
    pub fn block(&self, phi: &CVec) -> Result<CMat> {
        if phi.len() != self.n_h {
            return Err(Error::dim("Yukawa Higgs vector", self.n_h, phi.len()));
        }
        let mut m = CMat::zeros(self.n_l, self.n_r);
        for l in 0..self.n_l {
            for r in 0..self.n_r {
                let mut acc = c(0.0, 0.0);
                for h in 0..self.n_h {
                    let f = if self.conjugate[h] { phi[h].conj() } else { phi[h] };
                    acc += self.get(l, r, h) * f;
                }
                m[(l, r)] = acc;
            }
        }
        Ok(m)
    }
}

/// `G_Y(φ) = i [[0, M(φ)], [M(φ)†, 0]]`.
pub fn apply_yukawa(y: &YukawaMap, phi: &CVec) -> Result<CMat> {
    let m = y.block(phi)?;
    Ok(assemble_odd(&m) * I)
}

/// `[[0, m], [m†, 0]]`.
fn assemble_odd(m: &CMat) -> CMat {
    let (nl, nr) = (m.nrows(), m.ncols());
    let mut out = CMat::zeros(nl + nr, nl + nr);
    out.view_mut((0, nl), (nl, nr)).copy_from(m);
    out.view_mut((nl, 0), (nr, nl)).copy_from(&m.adjoint());
    out
}

/// `max |[ρ_F(X), G_Y(e)] - G_Y(ρ_H(X) e)|` over generators `X` and the real
/// basis `{e_h, i e_h}` of the Higgs space.
pub fn check_equivariance(y: &YukawaMap, rep_h: &LieAlgebraRep, frep: &ChiralFermionRep) -> Result<f64> {
    let (nl, nr, nh) = y.dims();
    if nl != frep.n_l() || nr != frep.n_r() {
        return Err(Error::dim("Yukawa fermion dimension", frep.n_f(), nl + nr));
    }
    if nh != rep_h.rep_dim() {
        return Err(Error::dim("Yukawa Higgs dimension", rep_h.rep_dim(), nh));
    }
    if rep_h.dim_g() != frep.total.dim_g() {
        return Err(Error::dim("shared algebra dimension", rep_h.dim_g(), frep.total.dim_g()));
    }
    let mut worst = 0.0f64;
    for (xh, xf) in rep_h.generators().iter().zip(frep.total.generators()) {
        for h in 0..nh {
            for unit in [ONE, I] {
                let mut e = CVec::zeros(nh);
                e[h] = unit;
                let lhs = commutator(xf, &apply_yukawa(y, &e)?);
                let rhs = apply_yukawa(y, &(xh * &e))?;
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenBlock {
    pub m2: f64,
    /// Orthonormal columns in `C^{N_L}`.
    #[serde(serialize_with = "crate::report::ser_cmat")]
    pub left: CMat,
    /// Orthonormal columns in `C^{N_R}`.
    #[serde(serialize_with = "crate::report::ser_cmat")]
    pub right: CMat,
}

impl EigenBlock {
    pub fn dim(&self) -> usize {
        self.left.ncols() + self.right.ncols()
    }
}

#[derive(Debug, Clone)]
pub struct MassData {
    /// The anti-Hermitian odd section `𝒟`.
    pub d_matrix: CMat,
    /// Upper-right block of `-i𝒟`.
    pub m_f: CMat,
    /// Eigenvalues of `m_F² = diag(M_F M_F†, M_F† M_F)`, ascending, over `N_F`.
    pub spectrum_sq: Vec<f64>,
    pub eigenspaces: Vec<EigenBlock>,
}

impl MassData {
    pub fn n_l(&self) -> usize {
        self.m_f.nrows()
    }

    pub fn n_r(&self) -> usize {
        self.m_f.ncols()
    }

    pub fn n_f(&self) -> usize {
        self.n_l() + self.n_r()
    }

    /// `m_F² = -𝒟²` on the internal fiber.
    pub fn mass_squared(&self) -> CMat {
        -(&self.d_matrix * &self.d_matrix)
    }
}

/// Mass data of the section `𝒟 = G_Y(z0)` at a vacuum.
pub fn mass_matrix(y: &YukawaMap, vac: &VacuumSolution, tol: &Tolerances) -> Result<MassData> {
    mass_matrix_at(y, &vac.z0, tol)
}

/// Mass data of `G_Y(z)` at an arbitrary Higgs vector.
pub fn mass_matrix_at(y: &YukawaMap, z: &CVec, tol: &Tolerances) -> Result<MassData> {
    let d = apply_yukawa(y, z)?;
    let (nl, nr, _) = y.dims();
    mass_data_from_section(d, nl, nr, tol)
}

/// Validate an anti-Hermitian odd section and extract its mass data.
pub fn mass_data_from_section(d: CMat, n_l: usize, n_r: usize, tol: &Tolerances) -> Result<MassData> {
    if d.nrows() != n_l + n_r || d.ncols() != n_l + n_r {
        return Err(Error::dim("mass section size", n_l + n_r, d.nrows()));
    }
    let diag = max_abs(&d.view((0, 0), (n_l, n_l)).into_owned()).max(max_abs(&d.view((n_l, n_l), (n_r, n_r)).into_owned()));
    let scale = max_abs(&d).max(1.0);
    if diag > tol.block_structure * scale {
        return Err(Error::BlockStructureViolation { residual: diag });
    }
    let anti = anti_hermitian_residual(&d);
    if anti > tol.block_structure * scale {
        return Err(Error::InvalidArgument(format!(
            "mass section is not anti-Hermitian (residual {anti:.3e})"
        )));
    }
    let m_f = (d.view((0, n_l), (n_l, n_r)).into_owned()) * (-I);
    let (spectrum_sq, eigenspaces) = split_by_singular_values(&m_f, tol.mass_grouping);
    Ok(MassData {
        d_matrix: d,
        m_f,
        spectrum_sq,
        eigenspaces,
    })
}

/// Group the singular triples of `m` into eigenbundles of `m m†` and `m† m`.
fn split_by_singular_values(m: &CMat, rel_group: f64) -> (Vec<f64>, Vec<EigenBlock>) {
    let (nl, nr) = (m.nrows(), m.ncols());
    let k = nl.min(nr);
    let (sigma, u, v) = if k == 0 {
        (Vec::new(), CMat::zeros(nl, 0), CMat::zeros(nr, 0))
    } else {
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("requested U");
        let v = svd.v_t.expect("requested V^T").adjoint();
        (svd.singular_values.iter().copied().collect::<Vec<_>>(), u, v)
    };

    let mut spectrum: Vec<f64> = sigma.iter().flat_map(|s| [s * s, s * s]).collect();
    spectrum.extend(std::iter::repeat_n(0.0, (nl - k) + (nr - k)));
    spectrum.sort_by(f64::total_cmp);

    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cut = rel_group * sigma_max;
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sigma[a].total_cmp(&sigma[b]));

    // Clusters of indices with nearly equal singular values; the first
    // cluster holds the (near) zero ones.
    let mut zero: Vec<usize> = Vec::new();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        if sigma_max == 0.0 || sigma[i] <= cut {
            zero.push(i);
            continue;
        }
        match clusters.last_mut() {
            Some(cl) if sigma[i] - sigma[cl[0]] <= cut => cl.push(i),
            _ => clusters.push(vec![i]),
        }
    }

    let pick = |mat: &CMat, idx: &[usize]| {
        let mut out = CMat::zeros(mat.nrows(), idx.len());
        for (j, &i) in idx.iter().enumerate() {
            out.set_column(j, &mat.column(i));
        }
        out
    };

    let mut blocks = Vec::new();
    let zero_left = {
        let kept = pick(&u, &zero);
        let massive: Vec<usize> = clusters.iter().flatten().copied().collect();
        let comp = complex_complement(&hstack(&pick(&u, &massive), &kept), nl);
        hstack(&kept, &comp)
    };
    let zero_right = {
        let kept = pick(&v, &zero);
        let massive: Vec<usize> = clusters.iter().flatten().copied().collect();
        let comp = complex_complement(&hstack(&pick(&v, &massive), &kept), nr);
        hstack(&kept, &comp)
    };
    if zero_left.ncols() + zero_right.ncols() > 0 {
        let m2 = if zero.is_empty() {
            0.0
        } else {
            zero.iter().map(|&i| sigma[i] * sigma[i]).sum::<f64>() / zero.len() as f64
        };
        blocks.push(EigenBlock {
            m2,
            left: zero_left,
            right: zero_right,
        });
    }
    for cl in &clusters {
        let m2 = cl.iter().map(|&i| sigma[i] * sigma[i]).sum::<f64>() / cl.len() as f64;
        blocks.push(EigenBlock {
            m2,
            left: pick(&u, cl),
            right: pick(&v, cl),
        });
    }
    (spectrum, blocks)
}

fn hstack(a: &CMat, b: &CMat) -> CMat {
    let mut out = CMat::zeros(a.nrows(), a.ncols() + b.ncols());
    out.view_mut((0, 0), (a.nrows(), a.ncols())).copy_from(a);
    out.view_mut((0, a.ncols()), (b.nrows(), b.ncols())).copy_from(b);
    out
}

/// The eigenbundle blocks of `m_F²`, regrouped at the given tolerance.
pub fn eigenbundle_decomposition(md: &MassData, tol: &Tolerances) -> Vec<EigenBlock> {
    split_by_singular_values(&md.m_f, tol.mass_grouping).1
}

/// Certificate that the blocks form an orthogonal decomposition of the
/// fiber into eigenspaces of `m_F²`.
#[derive(Debug, Clone, Serialize)]
pub struct DecompositionCertificate {
    pub total_dim: usize,
    pub n_f: usize,
    /// `|Σ m² (P_L ⊕ P_R) - m_F²|`.
    pub reconstruction: f64,
    /// Largest deviation of any block basis from orthonormality, including
    /// cross-block overlaps.
    pub orthonormality: f64,
    /// `|m_F² v - m² v|` over all basis vectors.
    pub eigen_residual: f64,
}

pub fn decomposition_certificate(md: &MassData, blocks: &[EigenBlock]) -> DecompositionCertificate {
    let (nl, nr) = (md.n_l(), md.n_r());
    let nf = nl + nr;
    let mut recon = CMat::zeros(nf, nf);
    let mut all = CMat::zeros(nf, 0);
    for b in blocks {
        let mut embedded = CMat::zeros(nf, b.dim());
        embedded.view_mut((0, 0), (nl, b.left.ncols())).copy_from(&b.left);
        embedded
            .view_mut((nl, b.left.ncols()), (nr, b.right.ncols()))
            .copy_from(&b.right);
        recon += &embedded * embedded.adjoint() * c(b.m2, 0.0);
        all = hstack(&all, &embedded);
    }
    let m2 = md.mass_squared();
    let orthonormality = if all.ncols() > 0 {
        max_abs(&(all.adjoint() * &all - identity(all.ncols())))
    } else {
        0.0
    };
    let mut eigen_residual = 0.0f64;
    let mut col = 0;
    for b in blocks {
        for _ in 0..b.dim() {
            let v = all.column(col).into_owned();
            eigen_residual = eigen_residual.max((&m2 * &v - &v * c(b.m2, 0.0)).norm());
            col += 1;
        }
    }
    DecompositionCertificate {
        total_dim: blocks.iter().map(EigenBlock::dim).sum(),
        n_f: nf,
        reconstruction: max_abs(&(recon - m2)),
        orthonormality,
        eigen_residual,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClauseResult {
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ClauseResult {
    fn new(residual: f64, tolerance: f64) -> Self {
        ClauseResult {
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    /// `max |[𝒟, ρ_F(X)]|` over the isotropy basis.
    pub commutant: ClauseResult,
    /// Largest spectral multiset drift between `z0` and `exp(g) z0`.
    pub orbit_spectrum: ClauseResult,
    /// `max |G_Y(ρ_H(g) z0) - ρ_F(g) 𝒟 ρ_F(g)†|` along the same samples.
    pub orbit_covariance: ClauseResult,
    pub orbit_samples: usize,
    pub decomposition: DecompositionCertificate,
    pub decomposition_pass: bool,
}

impl LemmaReport {
    /// Orbit clause: the mass section is gauge equivalent along the orbit and
    /// its spectrum is unchanged.
    pub fn orbit_pass(&self) -> bool {
        self.orbit_spectrum.pass && self.orbit_covariance.pass
    }

    pub fn pass(&self) -> bool {
        self.commutant.pass && self.orbit_pass() && self.decomposition_pass
    }

    /// `Ok` when every clause holds, otherwise the first failing clause.
    pub fn verdict(&self) -> Result<()> {
        if !self.commutant.pass {
            return Err(Error::LemmaViolation {
                clause: "commutant",
                detail: format!(
                    "mass matrix does not commute with the isotropy algebra of the vacuum (residual {:.3e} > {:.1e}); \
                     the Yukawa tensor is not equivariant for these representations",
                    self.commutant.residual, self.commutant.tolerance
                ),
            });
        }
        if !self.orbit_pass() {
            return Err(Error::LemmaViolation {
                clause: "orbit",
                detail: format!(
                    "mass data is not gauge equivalent along the vacuum orbit (spectral drift {:.3e}, covariance residual {:.3e}); \
                     the Yukawa tensor is not equivariant",
                    self.orbit_spectrum.residual, self.orbit_covariance.residual
                ),
            });
        }
        if !self.decomposition_pass {
            return Err(Error::LemmaViolation {
                clause: "decomposition",
                detail: format!(
                    "eigenbundles do not reconstruct m_F^2 (residual {:.3e}, dims {} of {})",
                    self.decomposition.reconstruction, self.decomposition.total_dim, self.decomposition.n_f
                ),
            });
        }
        Ok(())
    }
}

/// Options for the orbit sampling in [`lemma_report`].
#[derive(Debug, Clone, Copy)]
pub struct OrbitSampling {
    pub samples: usize,
    pub seed: u64,
}

impl Default for OrbitSampling {
    fn default() -> Self {
        OrbitSampling { samples: 20, seed: 0x5eed }
    }
}

/// Evaluate every clause of the mass-matrix lemma without failing.
pub fn lemma_report(
    y: &YukawaMap,
    md: &MassData,
    vac: &VacuumSolution,
    frep: &ChiralFermionRep,
    rep_h: &LieAlgebraRep,
    sampling: OrbitSampling,
    tol: &Tolerances,
) -> Result<LemmaReport> {
    let mut commutant = 0.0f64;
    for coeffs in &vac.isotropy.basis {
        let x = frep.total.element(coeffs)?;
        commutant = commutant.max(commutant_check(std::slice::from_ref(&x), &md.d_matrix)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
    let mut spectrum_drift = 0.0f64;
    let mut covariance = 0.0f64;
    for _ in 0..sampling.samples {
        let g: Vec<f64> = (0..rep_h.dim_g())
            .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
            .collect();
        let moved = exp_map(rep_h, &g)? * &vac.z0;
        let md_moved = mass_matrix_at(y, &moved, tol)?;
        spectrum_drift = spectrum_drift.max(multiset_distance(&md_moved.spectrum_sq, &md.spectrum_sq));
        let uf = exp_map(&frep.total, &g)?;
        let transported = &uf * &md.d_matrix * uf.adjoint();
        covariance = covariance.max(max_abs(&(md_moved.d_matrix - transported)));
    }

    let blocks = eigenbundle_decomposition(md, tol);
    let decomposition = decomposition_certificate(md, &blocks);
    let decomposition_pass = decomposition.total_dim == decomposition.n_f
        && decomposition.reconstruction <= tol.reconstruction
        && decomposition.orthonormality <= tol.reconstruction
        && decomposition.eigen_residual <= tol.reconstruction.max(tol.mass_grouping * max_abs(&md.m_f).powi(2));

    let mass_scale = max_abs(&md.d_matrix).max(1.0);
    Ok(LemmaReport {
        commutant: ClauseResult::new(commutant, tol.commutant * mass_scale),
        orbit_spectrum: ClauseResult::new(spectrum_drift, tol.orbit_spectrum * mass_scale * mass_scale),
        orbit_covariance: ClauseResult::new(covariance, tol.orbit_spectrum * mass_scale),
        orbit_samples: sampling.samples,
        decomposition,
        decomposition_pass,
    })
}

/// Like [`lemma_report`] but fails with [`Error::LemmaViolation`] naming the
/// first clause that does not hold.
pub fn lemma_verify(
    y: &YukawaMap,
    md: &MassData,
    vac: &VacuumSolution,
    frep: &ChiralFermionRep,
    rep_h: &LieAlgebraRep,
    tol: &Tolerances,
) -> Result<LemmaReport> {
    let report = lemma_report(y, md, vac, frep, rep_h, OrbitSampling::default(), tol)?;
    report.verdict()?;
    Ok(report)
}
