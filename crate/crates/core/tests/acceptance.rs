//! Acceptance criteria, one line each. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dirac_yukawa::clifford::{build_clifford, Signature};
use dirac_yukawa::commands::solve_vacuum;
use dirac_yukawa::config::{Model, ModelConfig};
use dirac_yukawa::group_rep::exp_map;
use dirac_yukawa::higgs_vacuum::VacuumSolution;
use dirac_yukawa::lattice_dirac::{
    bochner_connection, bochner_laplacian, branch_decomposition, build_vacuum_connection, build_vacuum_dirac,
    dirac_potential, fluctuation_operator, gauge_transform, group_branches, lagrangian_density, mean_mass,
    relative_curvature, restrict_to_internal, spectrum, FluctuationInput, GaugeField, HiggsField, TorusLattice,
    WilsonLine,
};
use dirac_yukawa::linalg::{c, hermitian_eigen, max_abs, CMat, I};
use dirac_yukawa::models;
use dirac_yukawa::yukawa_mass::{
    check_equivariance, eigenbundle_decomposition, lemma_report, mass_data_from_section, mass_matrix, MassData,
    OrbitSampling,
};

type Outcome = Result<String, String>;
type ChargeTable = Vec<(f64, Vec<f64>)>;
type Criterion = (&'static str, fn() -> Outcome, Duration);

struct Ew {
    model: Model,
    vac: VacuumSolution,
    md: MassData,
}

fn ew_from(cfg: ModelConfig) -> Ew {
    let model = cfg.build().expect("model builds");
    let vac = solve_vacuum(&model).expect("vacuum");
    let md = mass_matrix(&model.yukawa, &vac, &model.tol).expect("mass data");
    Ew { model, vac, md }
}

fn ew(sites: usize) -> Ew {
    let mut cfg = models::ew_reference();
    cfg.lattice.get_mut().sites = sites;
    ew_from(cfg)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// `max_i |a_i - b_i| / max(1, |b_i|)` for sorted lists of equal length.
fn rel_dist(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / y.abs().max(1.0))
        .fold(0.0, f64::max)
}

fn abs_dist(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn momenta_sq(lat: &TorusLattice, shift: &[f64]) -> Vec<f64> {
    let l = lat.sites;
    let k = |j: usize| 2.0 * std::f64::consts::PI * j as f64 / (l as f64 * lat.spacing);
    let mut out = Vec::new();
    for j1 in 0..l {
        for j2 in 0..l {
            out.push((k(j1) + shift[0]).powi(2) + (k(j2) + shift[1]).powi(2));
        }
    }
    out
}

fn c1_clifford() -> Outcome {
    let mut worst = 0.0f64;
    for n in [1, 2] {
        for sig in [Signature::Euclidean, Signature::Lorentzian] {
            let cl = build_clifford(n, sig).map_err(|e| e.to_string())?;
            let chk = cl.check();
            worst = worst.max(chk.max_residual());
            ensure(chk.max_residual() <= 1e-12, || format!("n={n} {sig:?}: {chk:?}"))?;
        }
    }
    Ok(format!("max residual {worst:.1e} <= 1e-12"))
}

fn c2_breaking() -> Outcome {
    let e = ew(4);
    let v = 2.0;
    let lambda = 1.0;
    let norm = e.vac.z0.norm();
    ensure((norm - v).abs() <= 1e-8, || format!("|z0| = {norm}"))?;
    ensure(e.vac.isotropy.dim == 1, || format!("isotropy dim {}", e.vac.isotropy.dim))?;
    ensure(e.vac.goldstone_count() == 3, || format!("Goldstone count {}", e.vac.goldstone_count()))?;
    ensure(e.vac.physical_count() == 1, || format!("physical count {}", e.vac.physical_count()))?;
    // second derivative of λ(r² - v²)² along r at r = v
    let f = |r: f64| lambda * (r * r - v * v).powi(2);
    let h = 1e-4;
    let oracle = (f(v + h) - 2.0 * f(v) + f(v - h)) / (h * h);
    let eig = e.vac.transversal_hessian_eigs[0];
    ensure((eig - oracle).abs() <= 1e-6 && (eig - 32.0).abs() <= 1e-6, || {
        format!("transversal eigenvalue {eig}, oracle {oracle}")
    })?;
    Ok(format!("|z0| = {norm:.12}, iso 1, Goldstone 3, physical 1, hessian {eig:.9} (oracle {oracle:.9})"))
}

fn c3_lemma() -> Outcome {
    let e = ew(4);
    let tol = &e.model.tol;
    let lemma = lemma_report(
        &e.model.yukawa,
        &e.md,
        &e.vac,
        &e.model.fermions,
        &e.model.higgs.rep,
        OrbitSampling { samples: 20, seed: 7 },
        tol,
    )
    .map_err(|err| err.to_string())?;
    ensure(lemma.commutant.residual <= 1e-12, || format!("commutant {:.3e}", lemma.commutant.residual))?;
    ensure(lemma.orbit_spectrum.residual <= 1e-9, || format!("orbit drift {:.3e}", lemma.orbit_spectrum.residual))?;
    ensure(lemma.decomposition.reconstruction <= 1e-10, || {
        format!("reconstruction {:.3e}", lemma.decomposition.reconstruction)
    })?;
    ensure(lemma.verdict().is_ok(), || "reference lemma verdict failed".into())?;

    let bad = ew_from(models::ew_with_hypercharge(-2.0 * 1.05));
    let eq = check_equivariance(&bad.model.yukawa, &bad.model.higgs.rep, &bad.model.fermions)
        .map_err(|err| err.to_string())?;
    let bad_lemma = lemma_report(
        &bad.model.yukawa,
        &bad.md,
        &bad.vac,
        &bad.model.fermions,
        &bad.model.higgs.rep,
        OrbitSampling { samples: 20, seed: 7 },
        &bad.model.tol,
    )
    .map_err(|err| err.to_string())?;
    ensure(eq >= 1e-3, || format!("negative control equivariance residual {eq:.3e} < 1e-3"))?;
    ensure(!bad_lemma.orbit_pass(), || {
        format!(
            "negative control orbit clause passed (spectral drift {:.3e}, covariance {:.3e})",
            bad_lemma.orbit_spectrum.residual, bad_lemma.orbit_covariance.residual
        )
    })?;
    Ok(format!(
        "commutant {:.1e}, orbit drift {:.1e} (20 samples), reconstruction {:.1e}; \
         y_R +5%: equivariance {:.2e}, orbit covariance {:.2e} fails, orbit spectral drift {:.1e}, commutant {:.2e}",
        lemma.commutant.residual,
        lemma.orbit_spectrum.residual,
        lemma.decomposition.reconstruction,
        eq,
        bad_lemma.orbit_covariance.residual,
        bad_lemma.orbit_spectrum.residual,
        bad_lemma.commutant.residual
    ))
}

fn c4_eigenbundles() -> Outcome {
    let e = ew(4);
    let blocks = eigenbundle_decomposition(&e.md, &e.model.tol);
    // oracle: M = y_e z0, so M M† = y_e² z0 z0† has eigenvalues {0, y_e² |z0|²}
    let m = &e.vac.z0 * c(0.5, 0.0);
    let (oracle, _) = hermitian_eigen(&(&m * m.adjoint()));
    ensure(blocks.len() == 2, || format!("{} blocks", blocks.len()))?;
    let nu = blocks.iter().find(|b| b.m2.abs() <= 1e-10).ok_or("no massless block")?;
    let el = blocks.iter().find(|b| (b.m2 - 1.0).abs() <= 1e-10).ok_or("no m^2 = 1 block")?;
    ensure((nu.left.ncols(), nu.right.ncols()) == (1, 0), || "neutrino block shape".into())?;
    ensure((el.left.ncols(), el.right.ncols()) == (1, 1), || "electron block shape".into())?;
    ensure((oracle[0] - nu.m2).abs() <= 1e-10 && (oracle[1] - el.m2).abs() <= 1e-10, || {
        format!("oracle {oracle:?}")
    })?;
    Ok(format!("massless left x1, m^2 = {:.12} left x1 + right x1", el.m2))
}

fn c5_dispersion() -> Outcome {
    let mut parts = Vec::new();
    for sites in [2, 4] {
        let e = ew(sites);
        let lat = &e.model.lattice;
        let cl = build_clifford(1, Signature::Euclidean).unwrap();
        let d = build_vacuum_dirac(lat, &cl, &e.md, &e.model.fermions, None).map_err(|x| x.to_string())?;
        let got = spectrum(&d, true, 1e-10).map_err(|x| x.to_string())?;
        let mut want = Vec::new();
        for p in momenta_sq(lat, &[0.0, 0.0]) {
            for m2 in &e.md.spectrum_sq {
                want.extend([p + m2; 2]);
            }
        }
        let r = rel_dist(&got, &sorted(want));
        ensure(r <= 1e-9, || format!("L={sites}: relative {r:.3e}"))?;
        parts.push(format!("L={sites} ({}x{}) rel {r:.1e}", d.matrix.nrows(), d.matrix.ncols()));
    }
    Ok(parts.join(", "))
}

fn c6_potential() -> Outcome {
    let e = ew(4);
    let lat = &e.model.lattice;
    let cl = build_clifford(1, Signature::Euclidean).unwrap();
    let d = build_vacuum_dirac(lat, &cl, &e.md, &e.model.fermions, None).map_err(|x| x.to_string())?;
    let lap = bochner_laplacian(&bochner_connection(&d, &cl).map_err(|x| x.to_string())?).map_err(|x| x.to_string())?;
    let vd = dirac_potential(&d, &lap, 1e-8).map_err(|x| x.to_string())?;
    ensure(vd.leakage <= 1e-10, || format!("leakage {:.3e}", vd.leakage))?;
    let dens = lagrangian_density(&vd, lat, 2).map_err(|x| x.to_string())?;
    let sum_m2: f64 = e.md.spectrum_sq.iter().sum();
    ensure((dens.per_site_trace - 2.0 * sum_m2).abs() <= 1e-9, || format!("trace {}", dens.per_site_trace))?;
    let mm = mean_mass(&e.md);
    ensure((2.0 * sum_m2 - 2.0 * 3.0 * mm).abs() <= 1e-12, || format!("mean mass {mm}"))?;

    let nf = e.model.fermions.n_f();
    let md0 = mass_data_from_section(CMat::zeros(nf, nf), 2, 1, &e.model.tol).map_err(|x| x.to_string())?;
    let d0 = build_vacuum_dirac(lat, &cl, &md0, &e.model.fermions, None).map_err(|x| x.to_string())?;
    let lap0 = bochner_laplacian(&bochner_connection(&d0, &cl).unwrap()).unwrap();
    let dens0 = lagrangian_density(&dirac_potential(&d0, &lap0, 1e-8).map_err(|x| x.to_string())?, lat, 2).unwrap();
    ensure(dens0.density == 0.0, || format!("massless density {}", dens0.density))?;
    Ok(format!(
        "leakage {:.1e}, per-site trace {:.12} (2^n sum m^2 = {}), 2^n N_F <m^2> = {:.12}, massless density {}",
        vd.leakage,
        dens.per_site_trace,
        2.0 * sum_m2,
        6.0 * mm,
        dens0.density
    ))
}

fn family() -> Vec<ModelConfig> {
    let mut out = Vec::new();
    for y in [0.0, 0.1, 0.5, 1.0, 2.0] {
        let mut cfg = models::ew_reference();
        for e in &mut cfg.yukawa.get_mut().entries {
            e.value = [y, 0.0];
        }
        out.push(cfg);
    }
    for y in [0.0, 0.3, 1.5] {
        let mut cfg = models::u1_higgs();
        cfg.yukawa.get_mut().entries[0].value = [y, 0.0];
        out.push(cfg);
    }
    for y in [[0.0, 0.0], [0.25, 0.25]] {
        let mut cfg = models::u1xu1_wilson();
        cfg.yukawa.get_mut().entries[0].value = y;
        out.push(cfg);
    }
    out
}

fn c7_curvature() -> Outcome {
    let mut worst = 0.0f64;
    let mut flat_count = 0;
    let fam = family();
    for (i, cfg) in fam.iter().enumerate() {
        let e = ew_from(cfg.clone());
        let cl = build_clifford(e.model.lattice.n, Signature::Euclidean).unwrap();
        let conn = build_vacuum_connection(&e.model.lattice, &cl, &e.md, &e.model.fermions, None)
            .map_err(|x| x.to_string())?;
        let curv = relative_curvature(&conn, &cl, &e.md).map_err(|x| x.to_string())?;
        worst = worst.max(curv.residual);
        ensure(curv.residual <= 1e-12, || format!("model {i}: residual {:.3e}", curv.residual))?;
        let flat = curv.max_norm <= 1e-12;
        let massless = e.md.spectrum_sq.iter().all(|m| m.abs() <= 1e-12);
        ensure(flat == massless, || format!("model {i}: flat {flat}, massless {massless}"))?;
        flat_count += flat as usize;
    }
    Ok(format!(
        "max residual {worst:.1e} over {} models; flat <=> massless holds ({flat_count} flat)",
        fam.len()
    ))
}

fn c8_gauge() -> Outcome {
    let e = ew(4);
    let lat = &e.model.lattice;
    let frep = &e.model.fermions;
    let cl = build_clifford(1, Signature::Euclidean).unwrap();
    let d = build_vacuum_dirac(lat, &cl, &e.md, frep, None).map_err(|x| x.to_string())?;
    let ns = lat.num_sites();
    let base = spectrum(&d, false, 1e-10).map_err(|x| x.to_string())?;

    let mut entry = 0.0f64;
    for t in [0.3, -1.1, 2.7] {
        let coeffs: Vec<f64> = e.vac.isotropy.basis[0].iter().map(|x| t * x).collect();
        let u = exp_map(&frep.total, &coeffs).unwrap();
        let g = gauge_transform(&d, &vec![u; ns], 1e-10).map_err(|x| x.to_string())?;
        entry = entry.max(max_abs(&(g.matrix - &d.matrix)));
    }
    ensure(entry <= 1e-12, || format!("residual-H entrywise {entry:.3e}"))?;

    let mut spec = 0.0f64;
    let mut pure = 0.0f64;
    let samples: [[f64; 4]; 4] = [[0.4, -1.2, 0.9, 0.3], [2.0, 0.1, -0.7, -1.5], [-0.3, 0.8, 1.9, 0.6], [1.0, 1.0, 1.0, 1.0]];
    for g in samples {
        let u = exp_map(&frep.total, &g).unwrap();
        let moved = gauge_transform(&d, &vec![u; ns], 1e-10).map_err(|x| x.to_string())?;
        spec = spec.max(abs_dist(&spectrum(&moved, false, 1e-10).unwrap(), &base));
        let uh = exp_map(&e.model.higgs.rep, &g).unwrap();
        let phi = &uh * &e.vac.z0 - &e.vac.z0;
        let input = FluctuationInput {
            gauge: GaugeField::zeros(ns, 2, 4),
            higgs: HiggsField::constant(ns, phi),
            unitary_gauge: None,
        };
        let dy = fluctuation_operator(&d, &input, &e.model.yukawa, &cl, frep, 1.0).map_err(|x| x.to_string())?;
        pure = pure.max(abs_dist(&spectrum(&dy, false, 1e-10).unwrap(), &base));
    }
    ensure(spec <= 1e-10, || format!("G spectrum drift {spec:.3e}"))?;
    ensure(pure <= 1e-10, || format!("pure-gauge spectrum drift {pure:.3e}"))?;
    Ok(format!("H entrywise {entry:.1e}, G spectrum {spec:.1e}, pure gauge t=1 {pure:.1e}"))
}

/// Branch by branch: restrict to each (mass, charge) group and compare with
/// `Σ_a (k_a + Σ_i θ_ai q_i)² + m²`, charges read off the isotropy basis.
fn wilson_case(e: &Ew, theta: Vec<Vec<f64>>) -> Result<(f64, ChargeTable), String> {
    let lat = &e.model.lattice;
    let frep = &e.model.fermions;
    let cl = build_clifford(1, Signature::Euclidean).unwrap();
    let wl = WilsonLine::new(theta.clone(), &e.vac.isotropy).map_err(|x| x.to_string())?;
    let d = build_vacuum_dirac(lat, &cl, &e.md, frep, Some(&wl)).map_err(|x| x.to_string())?;
    let (branches, _) = branch_decomposition(&e.md, frep, Some(&wl), 2).map_err(|x| x.to_string())?;
    let mut worst = 0.0f64;
    let mut table = Vec::new();
    for (b, basis) in group_branches(&branches, 1e-8) {
        let v = basis.column(0).into_owned();
        let q: Vec<f64> = e
            .vac
            .isotropy
            .basis
            .iter()
            .map(|x| {
                let gen = frep.total.element(x).unwrap() * -I;
                v.dotc(&(gen * &v)).re
            })
            .collect();
        let shift: Vec<f64> = theta.iter().map(|row| row.iter().zip(&q).map(|(t, qi)| t * qi).sum()).collect();
        let restricted = restrict_to_internal(&d, &basis).map_err(|x| x.to_string())?;
        ensure(restricted.leakage <= 1e-12, || format!("branch leakage {:.3e}", restricted.leakage))?;
        let got = spectrum(&restricted.op, true, 1e-10).map_err(|x| x.to_string())?;
        let mut want = Vec::new();
        for p in momenta_sq(lat, &shift) {
            want.extend(std::iter::repeat_n(p + b.m2, 2 * basis.ncols()));
        }
        worst = worst.max(rel_dist(&got, &sorted(want)));
        table.push((b.m2, q));
    }
    Ok((worst, table))
}

fn c9_wilson() -> Outcome {
    let e = ew(4);
    let (r1, t1) = wilson_case(&e, vec![vec![0.4], vec![-0.25]])?;
    let toy = ew_from(models::u1xu1_wilson());
    let (r2, t2) = wilson_case(&toy, vec![vec![0.15], vec![-0.35]])?;
    ensure(r1 <= 1e-9 && r2 <= 1e-9, || format!("residuals {r1:.3e}, {r2:.3e}"))?;
    let charged = |t: &[(f64, Vec<f64>)]| t.iter().filter(|(_, q)| q.iter().any(|x| x.abs() > 1e-9)).count();
    ensure(charged(&t1) >= 1 && charged(&t2) >= 1, || "no charged branch".into())?;
    let fmt = |t: &[(f64, Vec<f64>)]| {
        t.iter()
            .map(|(m2, q)| format!("m^2={m2:.3} q={:.6}", q[0]))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(format!("electroweak [{}] rel {r1:.1e}; u(1)xu(1) [{}] rel {r2:.1e}", fmt(&t1), fmt(&t2)))
}

fn c10_fluctuation() -> Outcome {
    let e = ew(4);
    let lat = &e.model.lattice;
    let frep = &e.model.fermions;
    let cl = build_clifford(1, Signature::Euclidean).unwrap();
    let d = build_vacuum_dirac(lat, &cl, &e.md, frep, None).map_err(|x| x.to_string())?;
    let ns = lat.num_sites();
    let h = 0.35;
    let radial = &e.vac.z0 * c(h / e.vac.z0.norm(), 0.0);
    let input = FluctuationInput {
        gauge: GaugeField::zeros(ns, 2, 4),
        higgs: HiggsField::constant(ns, radial),
        unitary_gauge: Some(e.vac.split.clone()),
    };
    let d0 = fluctuation_operator(&d, &input, &e.model.yukawa, &cl, frep, 0.0).map_err(|x| x.to_string())?;
    let bitwise = d0
        .matrix
        .iter()
        .zip(d.matrix.iter())
        .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
    ensure(bitwise, || "t = 0 differs from the vacuum operator".into())?;
    let d1 = fluctuation_operator(&d, &input, &e.model.yukawa, &cl, frep, 1.0).map_err(|x| x.to_string())?;
    let got = spectrum(&d1, true, 1e-10).map_err(|x| x.to_string())?;
    let m = 0.5 * (2.0 + h);
    let mut want = Vec::new();
    for p in momenta_sq(lat, &[0.0, 0.0]) {
        want.extend([p, p, p + m * m, p + m * m, p + m * m, p + m * m]);
    }
    let r = rel_dist(&got, &sorted(want));
    ensure(r <= 1e-9, || format!("relative {r:.3e}"))?;
    Ok(format!("t=0 bitwise identical; h={h}: electron mass y_e(v+h) = {m}, rel {r:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 clifford suite", c1_clifford, Duration::from_secs(1)),
        ("2 electroweak breaking", c2_breaking, Duration::from_secs(1)),
        ("3 lemma + negative control", c3_lemma, Duration::from_secs(5)),
        ("4 eigenbundle split", c4_eigenbundles, Duration::from_secs(60)),
        ("5 dispersion", c5_dispersion, Duration::from_secs(30)),
        ("6 dirac potential / lagrangian", c6_potential, Duration::from_secs(60)),
        ("7 curvature identity", c7_curvature, Duration::from_secs(60)),
        ("8 gauge covariance", c8_gauge, Duration::from_secs(60)),
        ("9 wilson-line holonomy", c9_wilson, Duration::from_secs(60)),
        ("10 fluctuation family", c10_fluctuation, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if took > budget => Err(format!("{msg}; runtime {took:.2?} over budget {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS  {name:<32} {msg} [{took:.2?}]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL  {name:<32} {msg} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
