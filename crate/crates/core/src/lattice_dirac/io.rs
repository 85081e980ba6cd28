//! Operator dumps and spectrum CSV.
//!
//! A dump is a JSON object:
//!
//! ```text
//! { "format": "dirac-yukawa-operator", "version": 1,
//!   "kind": ..., "source": ..., "symmetry": ...,
//!   "sites": S, "spinor_dim": P, "internal_dim": F,
//!   "order": ["site", "spinor", "internal"],
//!   "entries": [[re, im], ...] }        // row-major, (S·P·F)² pairs
//! ```

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use super::{LatticeOperator, OperatorMeta};
use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

pub const DUMP_FORMAT: &str = "dirac-yukawa-operator";
pub const DUMP_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorDump {
    pub format: String,
    pub version: u32,
    #[serde(flatten)]
    pub meta: OperatorMeta,
    pub sites: usize,
    pub spinor_dim: usize,
    pub internal_dim: usize,
    pub order: [String; 3],
    pub entries: Vec<[f64; 2]>,
}

impl OperatorDump {
    pub fn from_operator(op: &LatticeOperator) -> Self {
        let n = op.matrix.nrows();
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let z = op.matrix[(i, j)];
                entries.push([z.re, z.im]);
            }
        }
        OperatorDump {
            format: DUMP_FORMAT.into(),
            version: DUMP_VERSION,
            meta: op.meta.clone(),
            sites: op.sites,
            spinor_dim: op.spinor_dim,
            internal_dim: op.internal_dim,
            order: ["site".into(), "spinor".into(), "internal".into()],
            entries,
        }
    }

    pub fn to_operator(&self) -> Result<LatticeOperator> {
        if self.format != DUMP_FORMAT || self.version != DUMP_VERSION {
            return Err(Error::InvalidArgument(format!(
                "unsupported operator dump {} v{}",
                self.format, self.version
            )));
        }
        let n = self.sites * self.spinor_dim * self.internal_dim;
        if self.entries.len() != n * n {
            return Err(Error::dim("operator dump entries", n * n, self.entries.len()));
        }
        let m = CMat::from_row_iterator(n, n, self.entries.iter().map(|[re, im]| c(*re, *im)));
        let mut op = LatticeOperator::new(m, (self.sites, self.spinor_dim, self.internal_dim), "", self.meta.symmetry)?;
        op.meta = self.meta.clone();
        Ok(op)
    }
}

pub fn dump_operator(op: &LatticeOperator) -> Result<String> {
    Ok(serde_json::to_string(&OperatorDump::from_operator(op))?)
}

pub fn load_operator(text: &str) -> Result<LatticeOperator> {
    let dump: OperatorDump = serde_json::from_str(text)?;
    dump.to_operator()
}

/// `index,value` rows with 17 significant digits.
pub fn spectrum_csv(values: &[f64]) -> String {
    let mut out = String::from("index,value\n");
    for (i, v) in values.iter().enumerate() {
        let _ = writeln!(out, "{i},{v:.16e}");
    }
    out
}

pub fn parse_spectrum_csv(text: &str) -> Result<Vec<f64>> {
    let mut lines = text.lines();
    match lines.next() {
        Some("index,value") => {}
        other => {
            return Err(Error::InvalidArgument(format!("unexpected CSV header {other:?}")));
        }
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_once(',')
                .and_then(|(_, v)| v.parse::<f64>().ok())
                .ok_or_else(|| Error::InvalidArgument(format!("bad CSV row '{l}'")))
        })
        .collect()
}
