//! Borel-plane functions attached to the Stirling series.
//!
//! With `x = −e^{−1−ξ}`:
//!
//! * `λ̌_{3/2}(ξ) = W_0(x)/√(2π)` and `λ̂_{3/2}(ξ) = (W_0(x) − W_{−1}(x))/√(2π)`
//!   on the sheet `arg ξ = 0`;
//! * `χ̌(ξ) = i·W_{−1}(−e^{−1+ξ})/√(2π)` on the sheet `arg ξ = −π`, with minor
//!   `χ̂ = var χ̌`;
//! * `μ̂(ξ) = ξ^{−2}((ξ/2)coth(ξ/2) − 1)`, meromorphic.
//!
//! Points are [`SurfacePoint`]s: the argument selects the sheet. Values away
//! from the principal sheet come from continuing along a path and
//! transporting the two W branch labels across the lines `Im ξ ∈ 2πℤ` (see
//! [`path`]); evaluation then needs a single Lambert W call per label. The
//! [`tracking`] submodule continues the roots of `q − log q − 1 = ξ` by
//! Newton steps instead and serves as an independent check.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactseries::{bernoulli, to_f64};
use crate::lambertw::{lambert_w, LambertError, DEFAULT_TOL};
use crate::surface::SurfacePoint;

pub mod alien;
pub mod path;
pub mod tracking;

pub use alien::{
    alien, alien_plus, base_germ, compare_germs, germ_along, GermComparison, GermSample,
    GermSampling, SingularityData, SingularityType,
};
pub use path::{BranchPath, BranchState, Piece, Side, SurfacePath, PROXIMITY};

pub const SQRT_2PI: f64 = 2.506_628_274_631_000_7;

/// Radius of the half circles used to pass singular points.
pub const DETOUR_RADIUS: f64 = 0.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BorelError {
    #[error("point is {distance:e} from the singular point {omega}")]
    Proximity { omega: Complex64, distance: f64 },
    #[error("malformed path: {0}")]
    BadPath(String),
    #[error(transparent)]
    Lambert(#[from] LambertError),
    #[error("root tracking failed near {0}")]
    Tracking(Complex64),
    #[error("{0} is not a singular point 2πim with m ≠ 0")]
    NotSingular(Complex64),
    #[error("write failed: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BorelKind {
    #[serde(rename = "minor_lambda_3_2")]
    MinorLambda32,
    #[serde(rename = "major_lambda_3_2")]
    MajorLambda32,
    MinorChi,
    MajorChi,
    MinorMu,
}

impl BorelKind {
    pub fn name(self) -> &'static str {
        match self {
            BorelKind::MinorLambda32 => "minor_lambda_3_2",
            BorelKind::MajorLambda32 => "major_lambda_3_2",
            BorelKind::MinorChi => "minor_chi",
            BorelKind::MajorChi => "major_chi",
            BorelKind::MinorMu => "minor_mu",
        }
    }

    /// Argument of the base ray on which the defining formula holds.
    pub fn anchor(self) -> f64 {
        match self {
            BorelKind::MinorChi | BorelKind::MajorChi => -PI,
            _ => 0.0,
        }
    }

    pub fn is_minor(self) -> bool {
        matches!(
            self,
            BorelKind::MinorLambda32 | BorelKind::MinorChi | BorelKind::MinorMu
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorelFunction {
    pub kind: BorelKind,
    /// W branch labels on the anchor ray.
    pub branch_state: BranchState,
}

impl BorelFunction {
    pub fn new(kind: BorelKind) -> Self {
        BorelFunction {
            kind,
            branch_state: BranchState::default(),
        }
    }

    pub fn eval(&self, xi: SurfacePoint) -> Result<Complex64, BorelError> {
        if self.kind == BorelKind::MinorMu {
            return minor_mu(xi.to_complex());
        }
        self.eval_path(&SurfacePath::to_point(xi))
    }

    /// Value at the end of `path` of the continuation along it.
    pub fn eval_path(&self, path: &SurfacePath) -> Result<Complex64, BorelError> {
        if self.kind == BorelKind::MinorMu {
            return minor_mu(path.current());
        }
        let walk = path.rotated(-self.kind.anchor()).walk(0.0);
        let st = walk.transport(self.branch_state)?;
        let (wa, wb) = w_pair(walk.end(), st)?;
        Ok(self.combine(wa, wb))
    }

    pub(crate) fn combine(&self, wa: Complex64, wb: Complex64) -> Complex64 {
        let i = Complex64::i();
        match self.kind {
            BorelKind::MinorLambda32 => (wb - wa) / SQRT_2PI,
            BorelKind::MajorLambda32 => wb / SQRT_2PI,
            BorelKind::MinorChi => -i * (wb - wa) / SQRT_2PI,
            BorelKind::MajorChi => i * wa / SQRT_2PI,
            BorelKind::MinorMu => unreachable!("μ̂ is single-valued"),
        }
    }

    /// Constants `(A, B)` with `|f(ξ)| ≤ A|ξ| + B` on the rays used for
    /// Laplace transforms (any ray avoiding `2πiℤ` for λ̂ and χ̂; `|θ| ≤ π/4`
    /// for μ̂).
    pub fn growth_certificate(&self) -> (f64, f64) {
        match self.kind {
            BorelKind::MinorMu => (0.0, 0.5),
            _ => (1.5 / SQRT_2PI, 6.0 / SQRT_2PI),
        }
    }
}

pub fn minor_lambda32(xi: SurfacePoint) -> Result<Complex64, BorelError> {
    BorelFunction::new(BorelKind::MinorLambda32).eval(xi)
}

pub fn major_lambda32(xi: SurfacePoint) -> Result<Complex64, BorelError> {
    BorelFunction::new(BorelKind::MajorLambda32).eval(xi)
}

pub fn minor_chi(xi: SurfacePoint) -> Result<Complex64, BorelError> {
    BorelFunction::new(BorelKind::MinorChi).eval(xi)
}

pub fn major_chi(xi: SurfacePoint) -> Result<Complex64, BorelError> {
    BorelFunction::new(BorelKind::MajorChi).eval(xi)
}

/// `f(ξ) − f(e^{−2πi}ξ)`.
pub fn variation(f: &BorelFunction, xi: SurfacePoint) -> Result<Complex64, BorelError> {
    Ok(f.eval(xi)? - f.eval(xi.rotate(-2.0 * PI))?)
}

/// Continuation of `f` along `path` and then straight to `target`.
pub fn continue_minor(
    f: &BorelFunction,
    path: &BranchPath,
    target: SurfacePoint,
) -> Result<Complex64, BorelError> {
    let mut p = SurfacePath::along_branch_path(path, DETOUR_RADIUS)?;
    p.line_to(target.to_complex());
    f.eval_path(&p)
}

/// `W_a(x)` and `W_b(x)` at `x = −e^{−1−η}` for the labels `(a, b)`.
fn w_pair(eta: Complex64, st: BranchState) -> Result<(Complex64, Complex64), BorelError> {
    let (omega, dist) = path::distance_to_singular(eta);
    if dist < PROXIMITY {
        return Err(BorelError::Proximity {
            omega,
            distance: dist,
        });
    }
    let (_, t) = path::reduce(eta);
    let m = (-1.0 - eta.re).exp();
    let x = Complex64::new(-m * t.cos(), m * t.sin());
    let u = Complex64::new(eta.re, t);
    let wa = polish(lambert_w(x, st.plus, DEFAULT_TOL)?.w, u);
    let wb = polish(lambert_w(x, st.minus, DEFAULT_TOL)?.w, u);
    Ok((wa, wb))
}

/// `δ − log(1 + δ)` accurate for small `δ`.
fn log_defect(d: Complex64) -> Complex64 {
    if d.norm() < 0.25 {
        let mut term = d;
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 2..40 {
            term *= -d;
            sum -= term / k as f64;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        d - crate::reference::ln_1p(d)
    }
}

/// Near the branch point `w = −1`, refine `q = −w = 1 + δ` from
/// `δ − log(1+δ) = u` with the reduced `u = η − 2πin`, which keeps full
/// relative accuracy in `w + 1`.
fn polish(w: Complex64, u: Complex64) -> Complex64 {
    let mut d = -w - 1.0;
    if d.norm() >= 0.3 || d.norm() == 0.0 {
        return w;
    }
    for _ in 0..6 {
        let step = (log_defect(d) - u) * (1.0 + d) / d;
        d -= step;
        if step.norm() <= 1e-16 * d.norm() {
            break;
        }
    }
    if d.is_finite() {
        -1.0 - d
    } else {
        w
    }
}

fn mu_series() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        // Σ_{n≥1} B_{2n} ξ^{2n−2}/(2n)!
        let mut fact = num_bigint::BigInt::from(2);
        let mut out = Vec::new();
        for n in 1..=14usize {
            if n > 1 {
                fact *= num_bigint::BigInt::from((2 * n - 1) * 2 * n);
            }
            let b = bernoulli(2 * n);
            out.push(to_f64(
                &(b / crate::exactseries::Rational::from_integer(fact.clone())),
            ));
        }
        out
    })
}

fn coth(w: Complex64) -> Complex64 {
    if w.re < 0.0 {
        return -coth(-w);
    }
    let e = (-2.0 * w).exp();
    (1.0 + e) / (1.0 - e)
}

/// `μ̂(ξ) = ξ^{−2}((ξ/2)coth(ξ/2) − 1)`.
pub fn minor_mu(xi: Complex64) -> Result<Complex64, BorelError> {
    if xi.norm() < 0.5 {
        let x2 = xi * xi;
        let s = mu_series()
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x2 + c);
        return Ok(s);
    }
    let (omega, dist) = path::distance_to_singular(xi);
    if dist < PROXIMITY {
        return Err(BorelError::Proximity {
            omega,
            distance: dist,
        });
    }
    Ok(((xi / 2.0) * coth(xi / 2.0) - 1.0) / (xi * xi))
}

/// `|W_0(x) − W_{−1}(x)|` at `x = −e^{−1−ξ}`: vanishes exactly on `2πiℤ`.
pub fn branch_gap(xi: Complex64) -> Result<f64, BorelError> {
    let (_, t) = path::reduce(xi);
    let m = (-1.0 - xi.re).exp();
    let x = Complex64::new(-m * t.cos(), m * t.sin());
    let u = Complex64::new(xi.re, t);
    let w0 = polish(lambert_w(x, 0, DEFAULT_TOL)?.w, u);
    let k = if t >= 0.0 && t.is_sign_positive() {
        -1
    } else {
        1
    };
    let w1 = polish(lambert_w(x, k, DEFAULT_TOL)?.w, u);
    Ok((w0 - w1).norm())
}

/// Surface points `r·e^{iθ}` on a polar grid.
pub fn polar_grid(radii: &[f64], thetas: &[f64]) -> Vec<SurfacePoint> {
    thetas
        .iter()
        .flat_map(|&t| radii.iter().map(move |&r| SurfacePoint::new(r, t)))
        .collect()
}

pub const CSV_HEADER: &str = "re_xi,im_xi,sheet_theta,re_val,im_val,kind";

/// Write `f` on the given points as CSV. Points where the evaluation fails
/// (too close to a singular point) are skipped; their number is returned.
pub fn export_grid_csv<W: Write>(
    f: &BorelFunction,
    points: &[SurfacePoint],
    mut out: W,
) -> Result<usize, BorelError> {
    let io = |e: std::io::Error| BorelError::Io(e.to_string());
    writeln!(out, "{CSV_HEADER}").map_err(io)?;
    let mut skipped = 0;
    for p in points {
        let z = p.to_complex();
        match f.eval(*p) {
            Ok(v) => writeln!(
                out,
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{}",
                z.re,
                z.im,
                p.theta,
                v.re,
                v.im,
                f.kind.name()
            )
            .map_err(io)?,
            Err(BorelError::Proximity { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactseries::{puiseux_q, RootSign};

    fn sp(r: f64, t: f64) -> SurfacePoint {
        SurfacePoint::new(r, t)
    }

    /// Root of q − ln q − 1 = y on (1, ∞) or (0, 1) by bisection.
    fn real_root(y: f64, upper: bool) -> f64 {
        let f = |q: f64| q - q.ln() - 1.0 - y;
        let (mut lo, mut hi) = if upper {
            (1.0, 10.0 + 2.0 * y)
        } else {
            (1e-300, 1.0)
        };
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == upper {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn minor_near_origin_has_square_root_leading_term() {
        let v = minor_lambda32(sp(0.01, 0.0)).unwrap();
        let lead = 2.0 / PI.sqrt() * 0.1;
        assert!((v.re - lead).abs() < 2.0 * 0.01f64.powf(1.5));
        assert!(v.im.abs() < 1e-15);
        assert!(minor_lambda32(sp(1e-12, 0.0)).unwrap().norm() < 1e-5);
    }

    #[test]
    fn real_values_match_bisection_roots() {
        let v = minor_lambda32(sp(1.0, 0.0)).unwrap();
        let expect = (real_root(1.0, true) - real_root(1.0, false)) / SQRT_2PI;
        assert!((v.re - expect).abs() < 1e-13 && v.im.abs() < 1e-14);
        let m = major_lambda32(sp(0.01, 0.0)).unwrap();
        assert!((m.re + real_root(0.01, false) / SQRT_2PI).abs() < 1e-14);
    }

    #[test]
    fn major_constant_terms() {
        let m = major_lambda32(sp(1e-14, 0.0)).unwrap();
        assert!((m + 1.0 / SQRT_2PI).norm() < 1e-6);
        let c = major_chi(sp(1e-14, -PI)).unwrap();
        assert!((c + Complex64::i() / SQRT_2PI).norm() < 1e-6);
    }

    #[test]
    fn chi_leading_term_on_its_anchor() {
        let xi = sp(0.01, -PI);
        let v = minor_chi(xi).unwrap();
        let lead = 2.0 / PI.sqrt() * xi.sqrt();
        assert!((v - lead).norm() < 2.0 * 0.01f64.powf(1.5));
    }

    #[test]
    fn variation_of_major_is_minor() {
        let f = BorelFunction::new(BorelKind::MajorLambda32);
        for xi in [
            sp(0.05, 0.0),
            sp(0.05, 2.0),
            sp(3.0, 1.0),
            sp(5.0, -0.7),
            sp(2.0, 3.0),
        ] {
            let var = variation(&f, xi).unwrap();
            let minor = minor_lambda32(xi).unwrap();
            assert!(
                (var - minor).norm() <= 1e-12 * minor.norm().max(1.0),
                "{xi}: {var} vs {minor}"
            );
        }
        let g = BorelFunction::new(BorelKind::MajorChi);
        for xi in [sp(0.05, -PI), sp(2.0, -2.0), sp(4.0, -4.0)] {
            let var = variation(&g, xi).unwrap();
            let minor = minor_chi(xi).unwrap();
            assert!((var - minor).norm() <= 1e-12 * minor.norm().max(1.0));
        }
    }

    #[test]
    fn chi_symmetry() {
        for xi in [sp(0.3, 0.2), sp(2.0, -1.0), sp(7.0, -2.5), sp(1.0, 1.4)] {
            let c = minor_chi(xi).unwrap();
            let a = Complex64::i() * minor_lambda32(xi.rotate(-PI)).unwrap();
            let b = -Complex64::i() * minor_lambda32(xi.rotate(PI)).unwrap();
            assert!((c - a).norm() < 1e-12 && (c - b).norm() < 1e-12);
        }
    }

    #[test]
    fn majors_are_o_one_over_xi() {
        for theta in [-2.0, 0.0, 1.0, 3.0] {
            let mut prev = f64::INFINITY;
            for r in [1e-2, 1e-4, 1e-6, 1e-8] {
                let v = (r * major_lambda32(sp(r, theta)).unwrap()).norm();
                assert!(v < prev);
                prev = v;
            }
            assert!(prev < 1e-8);
        }
    }

    #[test]
    fn puiseux_agreement() {
        let qp = puiseux_q(RootSign::Plus, 16);
        let qm = puiseux_q(RootSign::Minus, 16);
        for xi in [
            sp(0.1, 0.0),
            sp(0.05, 1.2),
            sp(0.08, -2.4),
            sp(0.02, 3.0),
            sp(0.1, 5.0),
        ] {
            let minor = minor_lambda32(xi).unwrap();
            let series = (qp.eval(xi) - qm.eval(xi)) / SQRT_2PI;
            let scale = (qp.last_term_magnitude(xi) + qm.last_term_magnitude(xi)) / SQRT_2PI;
            assert!((minor - series).norm() <= 10.0 * scale + 1e-15, "{xi}");
            let major = major_lambda32(xi).unwrap();
            assert!((major + qm.eval(xi) / SQRT_2PI).norm() <= 10.0 * scale + 1e-15);
        }
    }

    #[test]
    fn branch_collisions_only_on_lattice() {
        for i in -12..=12 {
            for j in -12..=12 {
                let xi = Complex64::new(0.37 * i as f64 + 0.05, 0.61 * j as f64);
                let (_, d) = path::distance_to_singular(xi);
                let gap = branch_gap(xi).unwrap();
                assert!(gap > 0.1 * d.min(1.0).sqrt(), "{xi}: {gap}");
            }
        }
        assert!(branch_gap(Complex64::new(1e-8, 2.0 * PI)).unwrap() < 1e-3);
    }

    #[test]
    fn mu_values_and_poles() {
        assert!((minor_mu(Complex64::new(0.0, 0.0)).unwrap().re - 1.0 / 12.0).abs() < 1e-16);
        let one = minor_mu(Complex64::new(1.0, 0.0)).unwrap();
        let expect = 0.5 / 0.5f64.tanh() - 1.0;
        assert!((one.re - expect).abs() < 1e-15);
        // series and closed form agree across |ξ| = 1/2
        let a = minor_mu(Complex64::new(0.499_999, 0.0)).unwrap();
        let b = minor_mu(Complex64::new(0.500_001, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-6);
        for z in [Complex64::new(1.3, 2.0), Complex64::new(-0.2, 0.4)] {
            let e = minor_mu(z).unwrap() - minor_mu(-z).unwrap();
            assert!(e.norm() < 1e-15);
        }
        for m in [1.0, -1.0] {
            let w = Complex64::new(0.0, 2.0 * PI * m);
            for r in [1e-2, 1e-4] {
                let z = w + Complex64::from_polar(r, 0.7);
                let rest = minor_mu(z).unwrap() - 1.0 / (w * (z - w));
                assert!(rest.norm() < 1.0, "m={m}");
            }
        }
        assert!(matches!(
            minor_mu(Complex64::new(0.0, 2.0 * PI)),
            Err(BorelError::Proximity { .. })
        ));
    }

    #[test]
    fn mu_residue_by_contour() {
        use crate::quadrature::{integrate_periodic, QuadratureSpec};
        let w = Complex64::new(0.0, 2.0 * PI);
        let r = 0.5;
        let res = integrate_periodic(
            |t| {
                let e = Complex64::from_polar(r, t);
                minor_mu(w + e).unwrap() * Complex64::i() * e
            },
            &QuadratureSpec::default(),
        )
        .unwrap()
        .value
            / (2.0 * PI * Complex64::i());
        assert!((res - 1.0 / w).norm() < 1e-13);
    }

    #[test]
    fn csv_export() {
        let f = BorelFunction::new(BorelKind::MinorLambda32);
        let mut pts = polar_grid(&[0.5, 1.0], &[0.0, 1.0]);
        pts.push(SurfacePoint::new(2.0 * PI, PI / 2.0));
        let mut buf = Vec::new();
        let skipped = export_grid_csv(&f, &pts, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert_eq!(skipped, 1);
        assert!(lines[1].ends_with(",minor_lambda_3_2"));
        assert_eq!(lines[1].split(',').count(), 6);
    }
}
