//! The `check | break | masses | lattice | verify-all` pipeline.
//!
//! Commands return `Err` only for input problems (bad files, inconsistent
//! dimensions). Physics failures are recorded in the report and make it fail.

use serde::Serialize;

use crate::clifford::{build_clifford, Signature};
use crate::config::Model;
use crate::error::{Error, Result};
use crate::group_rep::exp_map;
use crate::higgs_vacuum::{check_vacuum, minimize, VacuumSolution};
use crate::lattice_dirac::{
    bochner_connection, bochner_laplacian, branch_decomposition, build_vacuum_connection, build_vacuum_dirac,
    contract_with_gamma, dirac_potential, expected_dirac_spectrum, fluctuation_operator, gauge_transform,
    group_branches, lagrangian_density, mean_mass, relative_curvature, restrict_to_internal, spectrum,
    FluctuationInput, GaugeField, HiggsField, LatticeOperator, WilsonLine,
};
use crate::linalg::{c, identity, kron, max_abs, multiset_distance, multiset_relative_distance, CMat, CVec};
use crate::report::{ser_cmat, ser_cvec, Check, Report};
use crate::yukawa_mass::{
    check_equivariance, eigenbundle_decomposition, lemma_report, mass_matrix, mass_matrix_at, EigenBlock, MassData,
    OrbitSampling,
};

/// Whether an error is the caller's fault (exit code 2) rather than a failed
/// invariant (exit code 1).
pub fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Config { .. } | Error::Io(_) | Error::Json(_) | Error::InvalidArgument(_) | Error::DimensionMismatch { .. }
    )
}

pub fn cmd_check(model: &Model) -> Result<Report> {
    let tol = &model.tol;
    let mut r = Report::new("check", &model.name);
    for sig in [Signature::Euclidean, Signature::Lorentzian] {
        let cl = build_clifford(model.lattice.n, sig)?;
        let name = format!("clifford.{}.n{}", if sig == Signature::Euclidean { "euclidean" } else { "lorentzian" }, cl.n());
        r.push(Check::at_most(name, cl.check().max_residual(), tol.clifford));
    }
    for rep in [&model.higgs.rep, &model.fermions.rep_l, &model.fermions.rep_r] {
        let chk = rep.check();
        r.push(Check::at_most(format!("rep.{}.anti_hermitian", rep.label), chk.anti_hermitian, tol.anti_hermitian));
        r.push(Check::at_most(format!("rep.{}.closure", rep.label), chk.closure, tol.closure));
    }
    r.push(Check::at_most("fermions.even", model.fermions.evenness_residual(), tol.commutant));
    let eq = check_equivariance(&model.yukawa, &model.higgs.rep, &model.fermions)?;
    r.push(Check::at_most("yukawa.equivariance", eq, tol.equivariance));
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
struct VacuumSection {
    #[serde(serialize_with = "ser_cvec")]
    z0: CVec,
    norm: f64,
    value: f64,
    isotropy_dim: usize,
    isotropy_basis: Vec<Vec<f64>>,
    goldstone_count: usize,
    physical_count: usize,
    transversal_hessian_eigs: Vec<f64>,
    gradient_norm: f64,
    iterations: usize,
}

/// Minimize the Higgs potential from the configured seed.
pub fn solve_vacuum(model: &Model) -> Result<VacuumSolution> {
    minimize(&model.higgs, &model.seed, &model.tol)
}

fn break_into(model: &Model, r: &mut Report) -> Result<Option<VacuumSolution>> {
    let tol = &model.tol;
    let vac = match solve_vacuum(model) {
        Ok(v) => v,
        Err(e) if is_input_error(&e) => return Err(e),
        Err(e) => {
            r.fail(format!("minimize: {e}"));
            return Ok(None);
        }
    };
    let chk = check_vacuum(&model.higgs, &vac)?;
    let scale = vac.z0.norm().max(1.0);
    r.push(Check::at_most("vacuum.gradient", chk.gradient_norm, tol.gradient * scale));
    r.push(Check::at_most("vacuum.goldstone_hessian", chk.goldstone_hessian, tol.goldstone_hessian));
    r.push(Check::at_most("vacuum.split_orthogonality", chk.orthogonality, tol.isotropy));
    r.push(Check::at_most("vacuum.split_completeness", chk.completeness, tol.isotropy));
    r.push(Check::at_most("vacuum.count_defect", chk.count_defect.unsigned_abs() as f64, 0.0));
    r.push(Check::at_least("vacuum.transversal_hessian_min", chk.min_transversal_eig, tol.goldstone_hessian));
    r.section(
        "vacuum",
        &VacuumSection {
            z0: vac.z0.clone(),
            norm: vac.z0.norm(),
            value: vac.value,
            isotropy_dim: vac.isotropy.dim,
            isotropy_basis: vac.isotropy.basis.clone(),
            goldstone_count: vac.goldstone_count(),
            physical_count: vac.physical_count(),
            transversal_hessian_eigs: vac.transversal_hessian_eigs.clone(),
            gradient_norm: vac.gradient_norm,
            iterations: vac.iterations,
        },
    )?;
    Ok(Some(vac))
}

pub fn cmd_break(model: &Model) -> Result<Report> {
    let mut r = Report::new("break", &model.name);
    break_into(model, &mut r)?;
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
struct LabeledBlock<'a> {
    label: String,
    #[serde(flatten)]
    block: &'a EigenBlock,
}

#[derive(Debug, Clone, Serialize)]
struct MassSection<'a> {
    #[serde(serialize_with = "ser_cmat")]
    m_f: CMat,
    spectrum_sq: Vec<f64>,
    mean_mass: f64,
    eigenbundles: Vec<LabeledBlock<'a>>,
}

fn block_label(b: &EigenBlock, zero_tol: f64) -> String {
    let chir = match (b.left.ncols(), b.right.ncols()) {
        (l, 0) => format!("left x{l}"),
        (0, rr) => format!("right x{rr}"),
        (l, rr) => format!("left x{l} + right x{rr}"),
    };
    if b.m2 <= zero_tol {
        format!("massless ({chir})")
    } else {
        format!("m^2 = {:.12} ({chir})", b.m2)
    }
}

fn masses_into(model: &Model, vac: &VacuumSolution, r: &mut Report) -> Result<Option<MassData>> {
    let tol = &model.tol;
    let eq = check_equivariance(&model.yukawa, &model.higgs.rep, &model.fermions)?;
    r.push(Check::at_most("yukawa.equivariance", eq, tol.equivariance));
    let md = match mass_matrix(&model.yukawa, vac, tol) {
        Ok(md) => md,
        Err(e) if is_input_error(&e) => return Err(e),
        Err(e) => {
            r.fail(format!("mass_matrix: {e}"));
            return Ok(None);
        }
    };
    let blocks = eigenbundle_decomposition(&md, tol);
    let lemma = lemma_report(
        &model.yukawa,
        &md,
        vac,
        &model.fermions,
        &model.higgs.rep,
        OrbitSampling::default(),
        tol,
    )?;
    r.push(Check::at_most("lemma.commutant", lemma.commutant.residual, lemma.commutant.tolerance));
    r.push(Check::at_most("lemma.orbit_spectrum", lemma.orbit_spectrum.residual, lemma.orbit_spectrum.tolerance));
    r.push(Check::at_most(
        "lemma.orbit_covariance",
        lemma.orbit_covariance.residual,
        lemma.orbit_covariance.tolerance,
    ));
    r.push(Check::at_most("lemma.reconstruction", lemma.decomposition.reconstruction, tol.reconstruction));
    r.push(Check::at_most(
        "lemma.decomposition_dim_defect",
        lemma.decomposition.n_f.abs_diff(lemma.decomposition.total_dim) as f64,
        0.0,
    ));
    if let Err(e) = lemma.verdict() {
        r.fail(e.to_string());
    }
    let zero_tol = tol.mass_grouping * max_abs(&md.m_f).max(1.0).powi(2);
    r.section(
        "masses",
        &MassSection {
            m_f: md.m_f.clone(),
            spectrum_sq: md.spectrum_sq.clone(),
            mean_mass: mean_mass(&md),
            eigenbundles: blocks
                .iter()
                .map(|b| LabeledBlock {
                    label: block_label(b, zero_tol),
                    block: b,
                })
                .collect(),
        },
    )?;
    r.section("lemma", &lemma)?;
    Ok(Some(md))
}

pub fn cmd_masses(model: &Model) -> Result<Report> {
    let mut r = Report::new("masses", &model.name);
    if let Some(vac) = break_into(model, &mut r)? {
        masses_into(model, &vac, &mut r)?;
    }
    Ok(r)
}

/// Everything `lattice` needs, computed once.
pub struct LatticeSetup {
    pub vac: VacuumSolution,
    pub md: MassData,
    pub wilson: Option<WilsonLine>,
    pub dirac: LatticeOperator,
}

pub fn lattice_setup(model: &Model) -> Result<LatticeSetup> {
    let vac = solve_vacuum(model)?;
    let md = mass_matrix(&model.yukawa, &vac, &model.tol)?;
    let cl = build_clifford(model.lattice.n, Signature::Euclidean)?;
    let wilson = model
        .wilson_theta
        .as_ref()
        .map(|t| WilsonLine::new(t.clone(), &vac.isotropy))
        .transpose()?;
    let dirac =
        build_vacuum_dirac(&model.lattice, &cl, &md, &model.fermions, wilson.as_ref())?.with_source(model.name.clone());
    Ok(LatticeSetup { vac, md, wilson, dirac })
}

#[derive(Debug, Clone, Serialize)]
struct WilsonRow {
    m2: f64,
    /// Momentum shift per axis.
    shift: Vec<f64>,
    internal_dim: usize,
    leakage: f64,
    residual: f64,
}

fn relative_spectral(actual: &[f64], expected: &[f64]) -> f64 {
    if actual.len() != expected.len() {
        return f64::INFINITY;
    }
    multiset_relative_distance(actual, expected)
}

fn lattice_into(model: &Model, vac: &VacuumSolution, md: &MassData, r: &mut Report) -> Result<()> {
    let tol = &model.tol;
    let lat = &model.lattice;
    let frep = &model.fermions;
    let cl = build_clifford(lat.n, Signature::Euclidean)?;
    let wilson = match &model.wilson_theta {
        Some(t) => Some(WilsonLine::new(t.clone(), &vac.isotropy)?),
        None => None,
    };
    let d = build_vacuum_dirac(lat, &cl, md, frep, wilson.as_ref())?.with_source(model.name.clone());

    // dispersion
    let d_sq = spectrum(&d, true, tol.lattice_hermitian)?;
    let (branches, joint) = branch_decomposition(md, frep, wilson.as_ref(), lat.axes())?;
    r.push(Check::at_most("lattice.branch_joint_eigen", joint, tol.dispersion * 10.0));
    let expected = expected_dirac_spectrum(lat, &branches, cl.spinor_dim());
    r.push(Check::at_most("lattice.dispersion", relative_spectral(&d_sq, &expected), tol.dispersion));
    r.spectra.insert("dirac_squared".into(), d_sq.clone());

    // contraction
    let conn = build_vacuum_connection(lat, &cl, md, frep, wilson.as_ref())?;
    let contracted = contract_with_gamma(&cl, &conn)?;
    r.push(Check::at_most("lattice.contraction", max_abs(&(contracted - &d.matrix)), tol.contraction));

    // Dirac potential and Lagrangian
    let lap = bochner_laplacian(&bochner_connection(&d, &cl)?)?;
    let m2_sum: f64 = md.spectrum_sq.iter().sum();
    let fiber_scale = cl.spinor_dim() as f64;
    match dirac_potential(&d, &lap, tol.multiplication_operator) {
        Ok(vd) => {
            r.push(Check::at_most("potential.site_leakage", vd.leakage, tol.site_leakage));
            r.push(Check::at_most("potential.site_constancy", vd.site_constancy, tol.site_constancy));
            let closed = kron(&identity(cl.spinor_dim()), &md.mass_squared());
            r.push(Check::at_most("potential.closed_form", max_abs(&(&vd.block - closed)), tol.trace));
            let dens = lagrangian_density(&vd, lat, frep.n_l())?;
            r.push(Check::close("lagrangian.trace", dens.per_site_trace, fiber_scale * m2_sum, tol.trace));
            let mm = mean_mass(md);
            r.push(Check::close(
                "lagrangian.mean_mass_identity",
                fiber_scale * m2_sum,
                fiber_scale * md.n_f() as f64 * mm,
                tol.mean_mass_identity * (1.0 + fiber_scale * m2_sum),
            ));
            #[derive(Serialize)]
            struct Lag<'a> {
                #[serde(flatten)]
                density: &'a crate::lattice_dirac::LagrangianDensity,
                mean_mass: f64,
            }
            r.section("lagrangian", &Lag { density: &dens, mean_mass: mm })?;
        }
        Err(e) => r.fail(format!("dirac_potential: {e}")),
    }
    // The canonical connection is not the Bochner connection of ∂̸_𝒟.
    let canon_lap = bochner_laplacian(&conn)?;
    let canon_leak = match dirac_potential(&d, &canon_lap, f64::INFINITY) {
        Ok(v) => v.leakage,
        Err(_) => f64::NAN,
    };
    r.section("canonical_connection_potential", &serde_json::json!({ "off_site_leakage": canon_leak }))?;

    // curvature
    let curv = relative_curvature(&conn, &cl, md)?;
    r.push(Check::at_most("curvature.identity", curv.residual, tol.curvature));
    let massless = md.spectrum_sq.iter().all(|m| *m <= tol.mass_grouping);
    let flat = curv.is_flat(tol.curvature);
    r.push(Check::at_most("curvature.flat_iff_massless", (flat != massless) as u8 as f64, 0.0));
    r.section(
        "curvature",
        &serde_json::json!({ "residual": curv.residual, "max_norm": curv.max_norm, "flat": flat, "massless": massless }),
    )?;

    // gauge covariance
    let eig_scale = d_sq.last().copied().unwrap_or(0.0).sqrt().max(1.0);
    let base = spectrum(&d, false, tol.lattice_hermitian)?;
    let mut h_entry = 0.0f64;
    for b in &vac.isotropy.basis {
        let coeffs: Vec<f64> = b.iter().map(|x| 0.7 * x).collect();
        let u = exp_map(&frep.total, &coeffs)?;
        let g = gauge_transform(&d, &vec![u; lat.num_sites()], tol.unitarity)?;
        h_entry = h_entry.max(max_abs(&(g.matrix - &d.matrix)));
    }
    r.push(Check::at_most("gauge.residual_entrywise", h_entry, tol.gauge_entrywise));
    let g_coeffs: Vec<f64> = (0..frep.total.dim_g()).map(|i| 0.9 - 0.37 * i as f64).collect();
    let u = exp_map(&frep.total, &g_coeffs)?;
    let moved = gauge_transform(&d, &vec![u.clone(); lat.num_sites()], tol.unitarity)?;
    let moved_spec = spectrum(&moved, false, tol.lattice_hermitian)?;
    r.push(Check::at_most("gauge.spectrum", multiset_distance(&moved_spec, &base), tol.gauge_spectrum * eig_scale));
    let uh = exp_map(&model.higgs.rep, &g_coeffs)?;
    let phi = &uh * &vac.z0 - &vac.z0;
    let pure = FluctuationInput {
        gauge: GaugeField::zeros(lat.num_sites(), lat.axes(), frep.total.dim_g()),
        higgs: HiggsField::constant(lat.num_sites(), phi),
        unitary_gauge: None,
    };
    let dy = fluctuation_operator(&d, &pure, &model.yukawa, &cl, frep, 1.0)?;
    let dy_spec = spectrum(&dy, false, tol.lattice_hermitian)?;
    r.push(Check::at_most("gauge.pure_gauge_fluctuation", multiset_distance(&dy_spec, &base), tol.gauge_spectrum * eig_scale));

    // fluctuation family
    let d0 = fluctuation_operator(&d, &pure, &model.yukawa, &cl, frep, 0.0)?;
    let identical = d0.matrix.iter().zip(d.matrix.iter()).all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
    r.push(Check::at_most("fluctuation.t0_bitwise_mismatch", (!identical) as u8 as f64, 0.0));
    let h = 0.25;
    let radial = &vac.z0 * c(h / vac.z0.norm(), 0.0);
    let phys = FluctuationInput {
        gauge: GaugeField::zeros(lat.num_sites(), lat.axes(), frep.total.dim_g()),
        higgs: HiggsField::constant(lat.num_sites(), radial.clone()),
        unitary_gauge: Some(vac.split.clone()),
    };
    let dh = fluctuation_operator(&d, &phys, &model.yukawa, &cl, frep, 1.0)?;
    let dh_sq = spectrum(&dh, true, tol.lattice_hermitian)?;
    let shifted = mass_matrix_at(&model.yukawa, &(&vac.z0 + &radial), tol)?;
    let (sb, _) = branch_decomposition(&shifted, frep, wilson.as_ref(), lat.axes())?;
    let expected_h = expected_dirac_spectrum(lat, &sb, cl.spinor_dim());
    r.push(Check::at_most("fluctuation.physical_higgs", relative_spectral(&dh_sq, &expected_h), tol.dispersion));
    r.section(
        "fluctuation",
        &serde_json::json!({ "h": h, "spectrum_sq_at_shifted_vacuum": shifted.spectrum_sq }),
    )?;

    // Wilson line, branch by branch
    if wilson.is_some() {
        let mut rows = Vec::new();
        for (b, basis) in group_branches(&branches, tol.mass_grouping.max(1e-8)) {
            let restricted = restrict_to_internal(&d, &basis)?;
            let got = spectrum(&restricted.op, true, tol.lattice_hermitian)?;
            let want = expected_dirac_spectrum(lat, &vec![b.clone(); basis.ncols()], cl.spinor_dim());
            let residual = relative_spectral(&got, &want);
            r.push(Check::at_most(
                format!("wilson.branch_m2={:.6}_q={:?}", b.m2, b.charges.iter().map(|q| (q * 1e9).round() / 1e9).collect::<Vec<_>>()),
                residual,
                tol.wilson_shift,
            ));
            r.push(Check::at_most("wilson.branch_invariance", restricted.leakage, tol.wilson_shift));
            rows.push(WilsonRow {
                m2: b.m2,
                shift: b.charges.clone(),
                internal_dim: basis.ncols(),
                leakage: restricted.leakage,
                residual,
            });
        }
        r.section("wilson", &rows)?;
    }
    Ok(())
}

pub fn cmd_lattice(model: &Model) -> Result<Report> {
    let mut r = Report::new("lattice", &model.name);
    if let Some(vac) = break_into(model, &mut r)? {
        if let Some(md) = masses_into(model, &vac, &mut r)? {
            lattice_into(model, &vac, &md, &mut r)?;
        }
    }
    Ok(r)
}

pub fn cmd_verify_all(model: &Model) -> Result<Report> {
    let mut r = Report::new("verify-all", &model.name);
    r.absorb(cmd_check(model)?);
    r.absorb(cmd_lattice(model)?);
    Ok(r)
}
