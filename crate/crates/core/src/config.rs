//! TOML model files.
//!
//! Complex numbers are written as `[re, im]`; a matrix is a list of rows of
//! such pairs. Every representation lists one generator per entry of
//! `algebra.labels`, in the same order. Validation errors carry
//! `path:line` locations.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::group_rep::LieAlgebraRep;
use crate::higgs_vacuum::{HiggsModel, PotentialKind};
use crate::lattice_dirac::{DerivativeKind, TorusLattice};
use crate::linalg::{c, CMat, CVec};
use crate::tolerances::Tolerances;
use crate::yukawa_mass::{ChiralFermionRep, YukawaMap};

pub const SCHEMA_VERSION: u32 = 1;

pub type Complex = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub schema_version: u32,
    pub name: String,
    pub algebra: AlgebraConfig,
    pub reps: BTreeMap<String, Spanned<RepConfig>>,
    pub higgs: Spanned<HiggsConfig>,
    pub fermions: Spanned<FermionConfig>,
    pub yukawa: Spanned<YukawaConfig>,
    pub lattice: Spanned<LatticeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wilson: Option<Spanned<WilsonConfig>>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepConfig {
    pub dim: usize,
    pub generators: Vec<Vec<Vec<Complex>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HiggsConfig {
    pub rep: String,
    pub seed: Vec<Complex>,
    pub potential: PotentialKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FermionConfig {
    pub left: String,
    pub right: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YukawaEntry {
    pub l: usize,
    pub r: usize,
    pub h: usize,
    pub value: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct YukawaConfig {
    #[serde(default)]
    pub entries: Vec<YukawaEntry>,
    /// Per Higgs component; missing entries mean `false`.
    #[serde(default)]
    pub conjugate: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub n: usize,
    pub sites: usize,
    pub spacing: f64,
    #[serde(default = "default_derivative")]
    pub derivative: DerivativeKind,
}

fn default_derivative() -> DerivativeKind {
    DerivativeKind::FourierSpectral
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WilsonConfig {
    /// One row per lattice axis, coefficients over the isotropy basis.
    pub theta: Vec<Vec<f64>>,
}

/// A validated model ready for the pipeline.
#[derive(Debug, Clone)]
pub struct Model {
    pub name: String,
    pub labels: Vec<String>,
    pub higgs: HiggsModel,
    pub seed: CVec,
    pub fermions: ChiralFermionRep,
    pub yukawa: YukawaMap,
    pub lattice: TorusLattice,
    pub wilson_theta: Option<Vec<Vec<f64>>>,
    pub tol: Tolerances,
}

/// Maps byte offsets to `origin:line`.
struct Locator<'a> {
    origin: &'a str,
    text: Option<&'a str>,
}

impl Locator<'_> {
    fn at(&self, span: std::ops::Range<usize>) -> String {
        match self.text {
            Some(t) if span.start <= t.len() => {
                let line = t[..span.start].bytes().filter(|b| *b == b'\n').count() + 1;
                format!("{}:{}", self.origin, line)
            }
            _ => self.origin.to_string(),
        }
    }
}

fn config_err(location: String, message: impl Into<String>) -> Error {
    Error::Config {
        location,
        message: message.into(),
    }
}

pub fn parse_model(text: &str, origin: &str) -> Result<ModelConfig> {
    let cfg: ModelConfig = toml::from_str(text).map_err(|e| {
        let location = match e.span() {
            Some(span) => Locator { origin, text: Some(text) }.at(span),
            None => origin.to_string(),
        };
        config_err(location, e.message().to_string())
    })?;
    cfg.validate_with(&Locator { origin, text: Some(text) })?;
    Ok(cfg)
}

/// Read, parse and validate a model file.
pub fn load_model(path: impl AsRef<Path>) -> Result<ModelConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_model(&text, &path.display().to_string())
}

pub fn save_model(cfg: &ModelConfig, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, cfg.to_toml()?)?;
    Ok(())
}

fn complex_matrix(rows: &[Vec<Complex>], dim: usize) -> Option<CMat> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return None;
    }
    Some(CMat::from_row_iterator(
        dim,
        dim,
        rows.iter().flat_map(|r| r.iter().map(|[re, im]| c(*re, *im))),
    ))
}

/// Inverse of the matrix encoding. Negative zeros are written as `0.0`.
pub fn encode_matrix(m: &CMat) -> Vec<Vec<Complex>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re + 0.0, m[(i, j)].im + 0.0]).collect())
        .collect()
}

impl ModelConfig {
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_err(self.name.clone(), e.to_string()))
    }

    /// Structural and algebraic validation without location information.
    pub fn validate(&self) -> Result<()> {
        self.validate_with(&Locator {
            origin: &self.name,
            text: None,
        })
    }

    fn validate_with(&self, loc: &Locator) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(config_err(
                loc.origin.to_string(),
                format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", self.schema_version),
            ));
        }
        self.build_with(loc).map(|_| ())
    }

    pub fn build(&self) -> Result<Model> {
        self.build_with(&Locator {
            origin: &self.name,
            text: None,
        })
    }

    fn rep(&self, name: &str, loc: &Locator, at: String) -> Result<LieAlgebraRep> {
        let spanned = self
            .reps
            .get(name)
            .ok_or_else(|| config_err(at, format!("unknown representation '{name}'")))?;
        let where_ = loc.at(spanned.span());
        let rc = spanned.get_ref();
        let k = self.algebra.labels.len();
        if rc.generators.len() != k {
            return Err(config_err(
                where_,
                format!("rep '{name}' has {} generators, algebra has {k}", rc.generators.len()),
            ));
        }
        let mut gens = Vec::with_capacity(k);
        for (i, g) in rc.generators.iter().enumerate() {
            let m = complex_matrix(g, rc.dim).ok_or_else(|| {
                config_err(
                    where_.clone(),
                    format!("rep '{name}' generator '{}' is not {d}x{d}", self.algebra.labels[i], d = rc.dim),
                )
            })?;
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(config_err(
                    where_,
                    format!("rep '{name}' generator '{}' has non-finite entries", self.algebra.labels[i]),
                ));
            }
            gens.push(m);
        }
        let rep = LieAlgebraRep::new(name, gens, rc.dim)?;
        let chk = rep.check();
        if chk.anti_hermitian > self.tolerances.anti_hermitian {
            let i = chk.worst_generator.unwrap_or(0);
            return Err(config_err(
                where_,
                format!(
                    "rep '{name}' generator '{}' is not anti-Hermitian (|X + X†| = {:.3e})",
                    self.algebra.labels[i], chk.anti_hermitian
                ),
            ));
        }
        if chk.closure > self.tolerances.closure {
            return Err(config_err(
                where_,
                format!("rep '{name}' generators do not close under the bracket (residual {:.3e})", chk.closure),
            ));
        }
        Ok(rep)
    }

    fn build_with(&self, loc: &Locator) -> Result<Model> {
        if self.algebra.labels.is_empty() {
            return Err(config_err(loc.origin.to_string(), "algebra.labels is empty"));
        }
        let h = self.higgs.get_ref();
        let h_at = loc.at(self.higgs.span());
        let rep_h = self.rep(&h.rep, loc, h_at.clone())?;
        if h.seed.len() != rep_h.rep_dim() {
            return Err(config_err(
                h_at,
                format!("higgs.seed has {} components, rep '{}' has dimension {}", h.seed.len(), h.rep, rep_h.rep_dim()),
            ));
        }
        let seed = CVec::from_iterator(h.seed.len(), h.seed.iter().map(|[re, im]| c(*re, *im)));
        let higgs = HiggsModel::new(rep_h, h.potential.clone()).map_err(|e| config_err(h_at.clone(), e.to_string()))?;

        let f = self.fermions.get_ref();
        let f_at = loc.at(self.fermions.span());
        let rep_l = self.rep(&f.left, loc, f_at.clone())?;
        let rep_r = self.rep(&f.right, loc, f_at)?;
        let fermions = ChiralFermionRep::new(rep_l, rep_r)?;

        let y = self.yukawa.get_ref();
        let y_at = loc.at(self.yukawa.span());
        let (nl, nr, nh) = (fermions.n_l(), fermions.n_r(), higgs.rep.rep_dim());
        let mut yukawa = YukawaMap::zeros(nl, nr, nh);
        for (k, e) in y.entries.iter().enumerate() {
            if e.l >= nl || e.r >= nr || e.h >= nh {
                return Err(config_err(
                    y_at,
                    format!("yukawa.entries[{k}] = ({}, {}, {}) out of range ({nl}, {nr}, {nh})", e.l, e.r, e.h),
                ));
            }
            yukawa.set(e.l, e.r, e.h, c(e.value[0], e.value[1]))?;
        }
        if y.conjugate.len() > nh {
            return Err(config_err(y_at, format!("yukawa.conjugate has {} flags for {nh} Higgs components", y.conjugate.len())));
        }
        for (hh, flag) in y.conjugate.iter().enumerate() {
            yukawa.set_conjugate(hh, *flag)?;
        }

        let l = self.lattice.get_ref();
        let lattice = TorusLattice::new(l.n, l.sites, l.spacing, l.derivative)
            .map_err(|e| config_err(loc.at(self.lattice.span()), e.to_string()))?;
        let wilson_theta = match &self.wilson {
            Some(w) => {
                let theta = &w.get_ref().theta;
                if theta.len() != lattice.axes() {
                    return Err(config_err(
                        loc.at(w.span()),
                        format!("wilson.theta needs {} rows (one per axis), found {}", lattice.axes(), theta.len()),
                    ));
                }
                Some(theta.clone())
            }
            None => None,
        };
        Ok(Model {
            name: self.name.clone(),
            labels: self.algebra.labels.clone(),
            higgs,
            seed,
            fermions,
            yukawa,
            lattice,
            wilson_theta,
            tol: self.tolerances,
        })
    }
}
