//! Built-in reference models.
//!
//! `ew-reference` is the electroweak lepton sector: `su(2) ⊕ u(1)` with
//! generators `T_i = -(i/2) σ_i` and `Y = -i y`, so that the electric charge
//! is `T_3 + Y/2`. Higgs doublet `y = +1`, left lepton doublet `y = -1`,
//! right electron `y = -2`, potential `(|z|² - 4)²`, and the single coupling
//! `M(φ) = 0.5 φ` (a column in `C^{2×1}`).

use std::collections::BTreeMap;

use toml::Spanned;

use crate::clifford::pauli;
use crate::config::{
    encode_matrix, AlgebraConfig, FermionConfig, HiggsConfig, LatticeConfig, ModelConfig, RepConfig, WilsonConfig,
    YukawaConfig, YukawaEntry, SCHEMA_VERSION,
};
use crate::higgs_vacuum::PotentialKind;
use crate::lattice_dirac::DerivativeKind;
use crate::linalg::{c, identity, CMat, I};
use crate::tolerances::Tolerances;

pub const EW_REFERENCE: &str = "ew-reference";
pub const U1_HIGGS: &str = "u1-higgs";
pub const U1XU1_WILSON: &str = "u1xu1-wilson";
pub const EW_MASSLESS: &str = "ew-massless";

pub const EW_YUKAWA: f64 = 0.5;
pub const EW_VEV: f64 = 2.0;
pub const EW_LAMBDA: f64 = 1.0;

pub fn names() -> [&'static str; 4] {
    [EW_REFERENCE, U1_HIGGS, U1XU1_WILSON, EW_MASSLESS]
}

pub fn registry(name: &str) -> Option<ModelConfig> {
    match name {
        EW_REFERENCE => Some(ew_reference()),
        U1_HIGGS => Some(u1_higgs()),
        U1XU1_WILSON => Some(u1xu1_wilson()),
        EW_MASSLESS => Some(ew_massless()),
        _ => None,
    }
}

fn rep(dim: usize, gens: Vec<CMat>) -> Spanned<RepConfig> {
    Spanned::new(
        0..0,
        RepConfig {
            dim,
            generators: gens.iter().map(encode_matrix).collect(),
        },
    )
}

/// `su(2) ⊕ u(1)` generators on a doublet of hypercharge `y`.
pub fn ew_doublet(y: f64) -> Vec<CMat> {
    let mut gens: Vec<CMat> = pauli().iter().map(|s| s * c(0.0, -0.5)).collect();
    gens.push(identity(2) * (-I * y));
    gens
}

/// `su(2) ⊕ u(1)` generators on a singlet of hypercharge `y`.
pub fn ew_singlet(y: f64) -> Vec<CMat> {
    let mut gens = vec![CMat::zeros(1, 1); 3];
    gens.push(identity(1) * (-I * y));
    gens
}

fn lattice(n: usize, sites: usize) -> Spanned<LatticeConfig> {
    Spanned::new(
        0..0,
        LatticeConfig {
            n,
            sites,
            spacing: 1.0,
            derivative: DerivativeKind::FourierSpectral,
        },
    )
}

/// Electroweak lepton sector with right-handed hypercharge `y_r`.
pub fn ew_with_hypercharge(y_r: f64) -> ModelConfig {
    let mut reps = BTreeMap::new();
    reps.insert("higgs".to_string(), rep(2, ew_doublet(1.0)));
    reps.insert("lepton_left".to_string(), rep(2, ew_doublet(-1.0)));
    reps.insert("electron_right".to_string(), rep(1, ew_singlet(y_r)));
    ModelConfig {
        schema_version: SCHEMA_VERSION,
        name: EW_REFERENCE.into(),
        algebra: AlgebraConfig {
            labels: ["T1", "T2", "T3", "Y"].map(String::from).to_vec(),
        },
        reps,
        higgs: Spanned::new(
            0..0,
            HiggsConfig {
                rep: "higgs".into(),
                seed: vec![[0.3, 0.1], [1.0, -0.2]],
                potential: PotentialKind::MexicanHat {
                    lambda: EW_LAMBDA,
                    v: EW_VEV,
                },
            },
        ),
        fermions: Spanned::new(
            0..0,
            FermionConfig {
                left: "lepton_left".into(),
                right: "electron_right".into(),
            },
        ),
        yukawa: Spanned::new(
            0..0,
            YukawaConfig {
                entries: (0..2)
                    .map(|k| YukawaEntry {
                        l: k,
                        r: 0,
                        h: k,
                        value: [EW_YUKAWA, 0.0],
                    })
                    .collect(),
                conjugate: vec![false, false],
            },
        ),
        lattice: lattice(1, 4),
        wilson: None,
        tolerances: Tolerances::default(),
    }
}

pub fn ew_reference() -> ModelConfig {
    ew_with_hypercharge(-2.0)
}

pub fn ew_massless() -> ModelConfig {
    let mut cfg = ew_reference();
    cfg.name = EW_MASSLESS.into();
    cfg.yukawa.get_mut().entries.clear();
    cfg
}

/// Single `u(1)`: Higgs and left fermion of charge 1, right fermion neutral.
pub fn u1_higgs() -> ModelConfig {
    let q = |charge: f64| vec![identity(1) * (-I * charge)];
    let mut reps = BTreeMap::new();
    reps.insert("higgs".to_string(), rep(1, q(1.0)));
    reps.insert("left".to_string(), rep(1, q(1.0)));
    reps.insert("right".to_string(), rep(1, q(0.0)));
    ModelConfig {
        schema_version: SCHEMA_VERSION,
        name: U1_HIGGS.into(),
        algebra: AlgebraConfig {
            labels: vec!["Q".into()],
        },
        reps,
        higgs: Spanned::new(
            0..0,
            HiggsConfig {
                rep: "higgs".into(),
                seed: vec![[0.7, 0.4]],
                potential: PotentialKind::MexicanHat { lambda: 1.0, v: 2.0 },
            },
        ),
        fermions: Spanned::new(
            0..0,
            FermionConfig {
                left: "left".into(),
                right: "right".into(),
            },
        ),
        yukawa: Spanned::new(
            0..0,
            YukawaConfig {
                entries: vec![YukawaEntry {
                    l: 0,
                    r: 0,
                    h: 0,
                    value: [0.5, 0.0],
                }],
                conjugate: vec![false],
            },
        ),
        lattice: lattice(1, 2),
        wilson: None,
        tolerances: Tolerances::default(),
    }
}

/// `u(1)_A ⊕ u(1)_B` with a Higgs neutral under `B`, so `B` stays unbroken
/// and both chiral fermions carry `B`-charge 2. Ships with a Wilson line
/// along `B`.
pub fn u1xu1_wilson() -> ModelConfig {
    let q = |a: f64, b: f64| vec![identity(1) * (-I * a), identity(1) * (-I * b)];
    let mut reps = BTreeMap::new();
    reps.insert("higgs".to_string(), rep(1, q(1.0, 0.0)));
    reps.insert("left".to_string(), rep(1, q(1.0, 2.0)));
    reps.insert("right".to_string(), rep(1, q(0.0, 2.0)));
    ModelConfig {
        schema_version: SCHEMA_VERSION,
        name: U1XU1_WILSON.into(),
        algebra: AlgebraConfig {
            labels: vec!["A".into(), "B".into()],
        },
        reps,
        higgs: Spanned::new(
            0..0,
            HiggsConfig {
                rep: "higgs".into(),
                seed: vec![[0.5, -0.9]],
                potential: PotentialKind::CustomPolynomial {
                    coefficients: vec![0.0, -2.0, 0.5],
                },
            },
        ),
        fermions: Spanned::new(
            0..0,
            FermionConfig {
                left: "left".into(),
                right: "right".into(),
            },
        ),
        yukawa: Spanned::new(
            0..0,
            YukawaConfig {
                entries: vec![YukawaEntry {
                    l: 0,
                    r: 0,
                    h: 0,
                    value: [0.25, 0.25],
                }],
                conjugate: vec![false],
            },
        ),
        lattice: lattice(1, 4),
        wilson: Some(Spanned::new(
            0..0,
            WilsonConfig {
                theta: vec![vec![0.15], vec![-0.35]],
            },
        )),
        tolerances: Tolerances::default(),
    }
}
