//! Serializable output records shared by the CLI and the verification
//! suites. Complex numbers are `[re, im]` pairs; exact rationals are strings.

use std::io::{self, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::borelplane::{GermComparison, SingularityData};
use crate::laplace::{LaplaceResult, StokesReport};
use crate::realmajor::RealMajorValue;

pub type Pair = [f64; 2];

pub fn pair(z: Complex64) -> Pair {
    [z.re, z.im]
}

/// `{z, theta, value, est_error, panels}`, plus `qpath_nodes` for
/// real-major evaluations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaplaceRecord {
    pub z: Pair,
    pub theta: f64,
    pub value: Pair,
    pub est_error: f64,
    pub panels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qpath_nodes: Option<usize>,
}

impl LaplaceRecord {
    pub fn from_laplace(z: Complex64, theta: f64, r: &LaplaceResult) -> Self {
        LaplaceRecord {
            z: pair(z),
            theta,
            value: pair(r.value),
            est_error: r.est_error,
            panels: r.panels,
            qpath_nodes: None,
        }
    }

    pub fn from_real_major(z: Complex64, theta: f64, r: &RealMajorValue) -> Self {
        LaplaceRecord {
            z: pair(z),
            theta,
            value: pair(r.value),
            est_error: r.est_error,
            panels: r.panels,
            qpath_nodes: Some(r.qpath_nodes),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResumRecord {
    pub object: String,
    #[serde(flatten)]
    pub record: LaplaceRecord,
    pub oracle: Pair,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StokesRecord {
    pub z: Pair,
    pub theta_j1: f64,
    pub theta_j2: f64,
    pub l_j1: Pair,
    pub l_j2: Pair,
    pub factor: Pair,
    pub identity_residual: f64,
    pub gamma_z: Pair,
    pub gamma_one_minus_z: Pair,
    pub reflection_residual: f64,
    pub est_error: f64,
    pub panels: usize,
}

impl StokesRecord {
    pub fn new(r: &StokesReport, theta_j1: f64, theta_j2: f64) -> Self {
        StokesRecord {
            z: pair(r.z),
            theta_j1,
            theta_j2,
            l_j1: pair(r.l_j1.value),
            l_j2: pair(r.l_j2.value),
            factor: pair(r.factor),
            identity_residual: r.identity_residual,
            gamma_z: pair(r.gamma_z),
            gamma_one_minus_z: pair(r.gamma_one_minus_z),
            reflection_residual: r.reflection_residual,
            est_error: r.l_j1.est_error + r.l_j2.est_error,
            panels: r.l_j1.panels + r.l_j2.panels,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlienSampleRecord {
    pub rho: f64,
    pub alpha: f64,
    pub germ: Pair,
    pub base: Pair,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlienRecord {
    pub kind: String,
    pub operator: String,
    pub omega: Pair,
    pub ratio: Pair,
    pub spread: f64,
    pub relative_magnitude: f64,
    pub samples: Vec<AlienSampleRecord>,
}

impl AlienRecord {
    pub fn new(
        kind: &str,
        operator: &str,
        germ: &SingularityData,
        base: &SingularityData,
        cmp: &GermComparison,
    ) -> Self {
        AlienRecord {
            kind: kind.to_string(),
            operator: operator.to_string(),
            omega: pair(germ.location),
            ratio: pair(cmp.ratio),
            spread: cmp.spread,
            relative_magnitude: cmp.relative_magnitude,
            samples: germ
                .samples
                .iter()
                .zip(&base.samples)
                .map(|(g, b)| AlienSampleRecord {
                    rho: g.rho,
                    alpha: g.alpha,
                    germ: pair(g.value),
                    base: pair(b.value),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffsRecord {
    pub kmax: usize,
    pub order: usize,
    /// `a_1, …, a_kmax`.
    pub a: Vec<String>,
    /// Coefficients of `z^0, z^{−1}, …` in `λ̃`.
    pub lambda_tilde: Vec<String>,
    /// Coefficients of `z^0, z^{−1}, …` in `μ̃`.
    pub mu_tilde: Vec<String>,
    /// Coefficients of `exp(μ̃) − λ̃`.
    pub exp_residual: Vec<String>,
    pub exp_identity_holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    pub seconds: f64,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<CheckRecord>,
}

/// Flatten a JSON object into `key,value` CSV: arrays of two numbers become
/// `key_re,key_im`, nested arrays of objects are skipped.
pub fn record_csv<T: Serialize, W: Write>(record: &T, mut out: W) -> io::Result<()> {
    let v = serde_json::to_value(record).map_err(io::Error::other)?;
    let mut header = Vec::new();
    let mut row = Vec::new();
    if let serde_json::Value::Object(map) = v {
        for (k, v) in map {
            match v {
                serde_json::Value::Array(a) if a.len() == 2 && a.iter().all(|x| x.is_number()) => {
                    header.push(format!("{k}_re"));
                    header.push(format!("{k}_im"));
                    row.push(a[0].to_string());
                    row.push(a[1].to_string());
                }
                serde_json::Value::Array(_) | serde_json::Value::Object(_) => {}
                serde_json::Value::String(s) => {
                    header.push(k);
                    row.push(s);
                }
                other => {
                    header.push(k);
                    row.push(other.to_string());
                }
            }
        }
    }
    writeln!(out, "{}", header.join(","))?;
    writeln!(out, "{}", row.join(","))
}
