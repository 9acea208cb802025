//! Points of the Riemann surface of the logarithm.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A point `r·e^{iθ}` of the universal cover of `ℂ*`. The argument is not
/// reduced: `θ` and `θ + 2π` are different points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub r: f64,
    pub theta: f64,
}

impl SurfacePoint {
    /// Panics if `r` is not a positive finite number.
    pub fn new(r: f64, theta: f64) -> Self {
        assert!(
            r > 0.0 && r.is_finite(),
            "surface point needs r > 0, got {r}"
        );
        assert!(theta.is_finite(), "surface point needs a finite argument");
        SurfacePoint { r, theta }
    }

    pub fn try_new(r: f64, theta: f64) -> Option<Self> {
        (r > 0.0 && r.is_finite() && theta.is_finite()).then_some(SurfacePoint { r, theta })
    }

    /// Principal lift, `θ ∈ (−π, π]`.
    pub fn from_complex(z: Complex64) -> Self {
        SurfacePoint::new(z.norm(), z.arg())
    }

    /// Lift of `z` whose argument is the one closest to `near`.
    pub fn from_complex_near(z: Complex64, near: f64) -> Self {
        let a = z.arg();
        let k = ((near - a) / (2.0 * PI)).round();
        SurfacePoint::new(z.norm(), a + 2.0 * PI * k)
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.r, self.theta)
    }

    /// `e^{iα}·self`.
    pub fn rotate(self, alpha: f64) -> Self {
        SurfacePoint {
            r: self.r,
            theta: self.theta + alpha,
        }
    }

    pub fn scale(self, s: f64) -> Self {
        SurfacePoint::new(self.r * s, self.theta)
    }

    pub fn ln(self) -> Complex64 {
        Complex64::new(self.r.ln(), self.theta)
    }

    /// `√r·e^{iθ/2}`: the square root determined by the sheet.
    pub fn sqrt(self) -> Complex64 {
        Complex64::from_polar(self.r.sqrt(), 0.5 * self.theta)
    }

    /// `exp(c·log ξ)` with `log ξ = ln r + iθ`.
    pub fn powc(self, c: Complex64) -> Complex64 {
        (c * self.ln()).exp()
    }
}

impl fmt::Display for SurfacePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.r, self.theta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_changes_sign_after_full_turn() {
        let p = SurfacePoint::new(2.0, 0.3);
        let q = p.rotate(2.0 * PI);
        assert!((p.sqrt() + q.sqrt()).norm() < 1e-15);
        assert!((p.to_complex() - q.to_complex()).norm() < 1e-14);
    }

    #[test]
    fn lift_near_picks_closest_sheet() {
        let z = Complex64::new(0.0, 1.0);
        let p = SurfacePoint::from_complex_near(z, -3.0 * PI / 2.0 + 0.1);
        assert!((p.theta + 3.0 * PI / 2.0).abs() < 1e-15);
    }
}
