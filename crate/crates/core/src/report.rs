//! Versioned JSON reports.
//!
//! Every numeric check is stored with the tolerance it was tested against,
//! so verdicts can be recomputed from the report alone. Serialization goes
//! through `serde_json`, whose float formatting is shortest-roundtrip and
//! therefore deterministic.

use std::collections::BTreeMap;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::linalg::{CMat, CVec};

pub const REPORT_SCHEMA: &str = "dirac-yukawa-report";
pub const REPORT_VERSION: u32 = 1;

/// Complex matrix as rows of `[re, im]` pairs.
pub fn ser_cmat<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    rows.serialize(s)
}

/// Complex vector as `[re, im]` pairs.
pub fn ser_cvec<S: Serializer>(v: &CVec, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v.iter() {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// `le`: pass iff value <= tolerance. `ge`: pass iff value >= tolerance.
    pub relation: Relation,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Ge,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            relation: Relation::Le,
            pass: value <= tolerance,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            relation: Relation::Ge,
            pass: value >= tolerance,
        }
    }

    /// `|value - expected| <= tolerance`, stored as the deviation.
    pub fn close(name: impl Into<String>, value: f64, expected: f64, tolerance: f64) -> Self {
        Check::at_most(name, (value - expected).abs(), tolerance)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: u32,
    pub command: String,
    pub model: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub errors: Vec<String>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub sections: serde_json::Map<String, serde_json::Value>,
    /// Sorted eigenvalue lists, also exportable as CSV.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub spectra: BTreeMap<String, Vec<f64>>,
}

impl Report {
    pub fn new(command: impl Into<String>, model: impl Into<String>) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            version: REPORT_VERSION,
            command: command.into(),
            model: model.into(),
            pass: true,
            checks: Vec::new(),
            errors: Vec::new(),
            sections: serde_json::Map::new(),
            spectra: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, check: Check) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn fail(&mut self, message: impl Into<String>) {
        self.pass = false;
        self.errors.push(message.into());
    }

    pub fn section<T: Serialize>(&mut self, name: &str, value: &T) -> crate::error::Result<()> {
        self.sections.insert(name.to_string(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn absorb(&mut self, other: Report) {
        self.pass &= other.pass;
        self.checks.extend(other.checks);
        self.errors.extend(other.errors);
        self.sections.extend(other.sections);
        self.spectra.extend(other.spectra);
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> crate::error::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn checks_and_verdict() {
        let mut r = Report::new("check", "m");
        r.push(Check::at_most("a", 1e-13, 1e-12));
        assert!(r.pass);
        r.push(Check::at_least("b", 1e-4, 1e-3));
        assert!(!r.pass);
        assert_eq!(r.failed_checks().count(), 1);
        assert!(Check::close("c", 2.0 + 1e-10, 2.0, 1e-8).pass);
    }

    #[test]
    fn matrix_serialization() {
        let m = CMat::from_row_slice(1, 2, &[c(1.0, 2.0), c(0.0, -1.0)]);
        #[derive(Serialize)]
        struct W {
            #[serde(serialize_with = "ser_cmat")]
            m: CMat,
        }
        let s = serde_json::to_string(&W { m }).unwrap();
        assert_eq!(s, r#"{"m":[[[1.0,2.0],[0.0,-1.0]]]}"#);
    }

    #[test]
    fn json_is_deterministic() {
        let mut r = Report::new("check", "m");
        r.push(Check::at_most("x", 0.1 + 0.2, 1.0));
        r.section("s", &vec![1.5, 2.0]).unwrap();
        assert_eq!(r.to_json().unwrap(), r.clone().to_json().unwrap());
    }
}
