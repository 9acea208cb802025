//! Singular germs at `ω = 2πim` and the alien operators `Δ⁺_ω`, `Δ_ω`.
//!
//! A germ is sampled as the variation `f(ω+ξ) − f(ω + e^{−2πi}ξ)` of the
//! continued minor, at `ξ = ρ e^{i(arg ω − π + α)}`: the approach direction
//! is from the origin, rotated by a small angle `α`. Two germs are compared
//! through the ratio of their samples.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::path::{BranchPath, Side, SurfacePath};
use super::{BorelError, BorelFunction, DETOUR_RADIUS};
use crate::surface::SurfacePoint;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GermSampling {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
}

impl Default for GermSampling {
    fn default() -> Self {
        GermSampling {
            radii: vec![1e-2, 1e-3, 1e-4],
            angles: vec![0.0, 0.3, -0.4],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SingularityType {
    SquareRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GermSample {
    pub rho: f64,
    pub alpha: f64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingularityData {
    pub location: Complex64,
    pub type_tag: SingularityType,
    pub samples: Vec<GermSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GermComparison {
    /// Mean of the sample ratios.
    pub ratio: Complex64,
    /// Largest deviation of a sample ratio from the mean.
    pub spread: f64,
    /// Largest `|germ|/|base|` over the samples.
    pub relative_magnitude: f64,
}

fn singular_index(omega: Complex64) -> Result<i64, BorelError> {
    let m = (omega.im / (2.0 * PI)).round();
    if m == 0.0 || (omega - Complex64::new(0.0, 2.0 * PI * m)).norm() > 1e-9 * omega.norm() {
        return Err(BorelError::NotSingular(omega));
    }
    Ok(m as i64)
}

/// Argument of `ω` on the sheet of `f` nearest to its anchor ray.
fn approach_theta(f: &BorelFunction, m: i64) -> f64 {
    let a = if m > 0 { PI / 2.0 } else { -PI / 2.0 };
    let anchor = f.kind.anchor();
    a + 2.0 * PI * ((anchor - a) / (2.0 * PI)).round()
}

/// Germ at `ω` of the continuation that passes the earlier singular points
/// on the ray to the sides given by `word` (`word.len() = |m| − 1`).
pub fn germ_along(
    f: &BorelFunction,
    omega: Complex64,
    word: &[Side],
    sampling: &GermSampling,
) -> Result<SingularityData, BorelError> {
    let m = singular_index(omega)?;
    if word.len() as i64 != m.abs() - 1 {
        return Err(BorelError::BadPath(format!(
            "expected {} detours before 2πi·{m}, got {}",
            m.abs() - 1,
            word.len()
        )));
    }
    let theta = approach_theta(f, m);
    let d = Complex64::from_polar(1.0, theta);
    let omega = Complex64::new(0.0, 2.0 * PI * m as f64);
    let detours = word
        .iter()
        .enumerate()
        .map(|(j, &s)| (m.signum() * (j as i64 + 1), s))
        .collect();
    let bp = BranchPath::new(theta, detours)?;
    let mut samples = Vec::new();
    for &rho in &sampling.radii {
        if rho >= DETOUR_RADIUS {
            return Err(BorelError::BadPath(
                "sample radius exceeds the detour radius".into(),
            ));
        }
        for &alpha in &sampling.angles {
            let mut p = SurfacePath::along_branch_path(&bp, DETOUR_RADIUS)?;
            p.line_to(omega - d * rho);
            if alpha != 0.0 {
                p.arc_around(omega, alpha);
            }
            let v1 = f.eval_path(&p)?;
            p.arc_around(omega, -2.0 * PI);
            let v2 = f.eval_path(&p)?;
            samples.push(GermSample {
                rho,
                alpha,
                value: v1 - v2,
            });
        }
    }
    Ok(SingularityData {
        location: omega,
        type_tag: SingularityType::SquareRoot,
        samples,
    })
}

/// Germ of `f` itself at the origin, sampled at the points matching the
/// samples at `ω`.
pub fn base_germ(
    f: &BorelFunction,
    omega: Complex64,
    sampling: &GermSampling,
) -> Result<SingularityData, BorelError> {
    let m = singular_index(omega)?;
    let theta = approach_theta(f, m) - PI;
    let mut samples = Vec::new();
    for &rho in &sampling.radii {
        for &alpha in &sampling.angles {
            let value = f.eval(SurfacePoint::new(rho, theta + alpha))?;
            samples.push(GermSample { rho, alpha, value });
        }
    }
    Ok(SingularityData {
        location: Complex64::new(0.0, 0.0),
        type_tag: SingularityType::SquareRoot,
        samples,
    })
}

/// `Δ⁺_ω f`: the germ of the continuation passing every earlier singular
/// point to the right.
pub fn alien_plus(
    f: &BorelFunction,
    omega: Complex64,
    sampling: &GermSampling,
) -> Result<SingularityData, BorelError> {
    let m = singular_index(omega)?;
    germ_along(
        f,
        omega,
        &vec![Side::Right; (m.abs() - 1) as usize],
        sampling,
    )
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// `Δ_ω f = Σ_ε p(ε)!q(ε)!/r! · germ_ε`, over the `2^{r−1}` words of sides,
/// `p`/`q` counting right/left detours and `r = |m|`.
pub fn alien(
    f: &BorelFunction,
    omega: Complex64,
    sampling: &GermSampling,
) -> Result<SingularityData, BorelError> {
    let m = singular_index(omega)?;
    let r = m.unsigned_abs() as usize;
    let mut acc: Option<SingularityData> = None;
    for bits in 0..(1u64 << (r - 1)) {
        let word: Vec<Side> = (0..r - 1)
            .map(|j| {
                if bits >> j & 1 == 0 {
                    Side::Right
                } else {
                    Side::Left
                }
            })
            .collect();
        let p = word.iter().filter(|&&s| s == Side::Right).count();
        let weight = factorial(p) * factorial(r - 1 - p) / factorial(r);
        let g = germ_along(f, omega, &word, sampling)?;
        acc = Some(match acc {
            None => SingularityData {
                samples: g
                    .samples
                    .iter()
                    .map(|s| GermSample {
                        value: s.value * weight,
                        ..*s
                    })
                    .collect(),
                ..g
            },
            Some(mut a) => {
                for (x, y) in a.samples.iter_mut().zip(&g.samples) {
                    x.value += y.value * weight;
                }
                a
            }
        });
    }
    Ok(acc.expect("at least one word"))
}

pub fn compare_germs(germ: &SingularityData, base: &SingularityData) -> GermComparison {
    let ratios: Vec<Complex64> = germ
        .samples
        .iter()
        .zip(&base.samples)
        .map(|(g, b)| g.value / b.value)
        .collect();
    let n = ratios.len().max(1) as f64;
    let ratio = ratios.iter().sum::<Complex64>() / n;
    let spread = ratios
        .iter()
        .map(|r| (r - ratio).norm())
        .fold(0.0, f64::max);
    let relative_magnitude = ratios.iter().map(|r| r.norm()).fold(0.0, f64::max);
    GermComparison {
        ratio,
        spread,
        relative_magnitude,
    }
}
