//! Laplace transforms of minors along rays, of majors along Hankel
//! contours, and of real majors; plus gluing of directional sums and the
//! lateral sums across the singular direction `π/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::borelplane::{BorelError, BorelFunction, BorelKind};
use crate::quadrature::{integrate_try, QuadError, QuadResult, QuadratureSpec};
use crate::reference::{gamma_ref, ReferenceError};
use crate::surface::SurfacePoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub theta: f64,
}

impl Direction {
    pub fn new(theta: f64) -> Self {
        Direction { theta }
    }

    /// `Re(z e^{iθ})`: the decay rate of `e^{−zξ}` along the ray.
    pub fn decay(self, z: Complex64) -> f64 {
        (z * Complex64::from_polar(1.0, self.theta)).re
    }
}

/// `Π^θ_τ = {Re(z e^{iθ}) > τ}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HalfPlane {
    pub theta: f64,
    pub tau: f64,
}

impl HalfPlane {
    pub fn contains(&self, z: Complex64) -> bool {
        Direction::new(self.theta).decay(z) > self.tau
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LaplaceError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Borel(#[from] BorelError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
    #[error("z = {z} is not in the half-plane of direction {theta} (Re(z e^{{iθ}}) = {decay})")]
    NotAdmissible {
        z: Complex64,
        theta: f64,
        decay: f64,
    },
    #[error("directions {theta1} and {theta2} disagree by {mismatch:e}: a Stokes line lies between them")]
    StokesJump {
        theta1: f64,
        theta2: f64,
        mismatch: f64,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceResult {
    pub value: Complex64,
    /// Quadrature error estimate plus the tail bound.
    pub est_error: f64,
    pub panels: usize,
    pub radius: f64,
    pub tail_bound: f64,
}

impl LaplaceResult {
    fn from_parts(q: QuadResult, radius: f64, tail: f64) -> Self {
        LaplaceResult {
            value: q.value,
            est_error: q.est_error + tail,
            panels: q.panels,
            radius,
            tail_bound: tail,
        }
    }
}

/// `∫_R^∞ e^{−κs}(A s + B) ds`.
pub fn tail_bound(kappa: f64, a: f64, b: f64, r: f64) -> f64 {
    (-kappa * r).exp() * (a * r / kappa + a / (kappa * kappa) + b / kappa)
}

/// Smallest truncation radius (up to bisection accuracy) whose tail bound
/// is below `abs_tol`.
pub fn truncation_radius(
    kappa: f64,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), QuadError> {
    let at_max = tail_bound(kappa, a, b, spec.max_radius);
    if !(at_max <= spec.abs_tol) {
        return Err(QuadError::TailUnattainable {
            bound: at_max,
            max_radius: spec.max_radius,
        });
    }
    let (mut lo, mut hi) = (0.0, spec.max_radius);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if tail_bound(kappa, a, b, mid) <= spec.abs_tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, tail_bound(kappa, a, b, hi)))
}

fn radial_breaks(from: f64, to: f64) -> Vec<f64> {
    let mut b = vec![from];
    let mut x = from.max(0.125);
    while x < to {
        if x > from {
            b.push(x);
        }
        x *= 2.0;
    }
    b.push(to);
    b
}

/// `∫_0^{∞e^{iθ}} e^{−zξ} minor(ξ) dξ`, given `|minor(ξ)| ≤ A|ξ| + B` on
/// the ray. The variable `ξ = u²e^{iθ}` absorbs the square-root behaviour at
/// the origin.
pub fn laplace_ray<F, E>(
    minor: F,
    certificate: (f64, f64),
    theta: Direction,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<LaplaceResult, LaplaceError>
where
    F: Fn(SurfacePoint) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    spec.validate()?;
    let kappa = theta.decay(z);
    if !(kappa > 0.0) {
        return Err(LaplaceError::NotAdmissible {
            z,
            theta: theta.theta,
            decay: kappa,
        });
    }
    let (r, tail) = truncation_radius(kappa, certificate.0, certificate.1, spec)?;
    let e = Complex64::from_polar(1.0, theta.theta);
    let breaks: Vec<f64> = radial_breaks(0.0, r).into_iter().map(f64::sqrt).collect();
    let q = integrate_try(
        |u| {
            if u == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            let xi = u * u;
            minor(SurfacePoint::new(xi, theta.theta)).map(|f| (-z * e * xi).exp() * f * 2.0 * u * e)
        },
        &breaks,
        spec,
    )?;
    Ok(LaplaceResult::from_parts(q, r, tail))
}

/// Laplace transform of a Borel-plane minor with its own growth certificate.
pub fn laplace_borel(
    f: &BorelFunction,
    theta: Direction,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<LaplaceResult, LaplaceError> {
    if !f.kind.is_minor() {
        return Err(LaplaceError::Invalid(format!(
            "{} is a major; use laplace_hankel",
            f.kind.name()
        )));
    }
    if f.kind == BorelKind::MinorMu && theta.theta.abs() > PI / 4.0 {
        return Err(LaplaceError::Invalid(format!(
            "the growth bound of {} holds only for |theta| <= pi/4, got {}",
            f.kind.name(),
            theta.theta
        )));
    }
    laplace_ray(|xi| f.eval(xi), f.growth_certificate(), theta, z, spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HankelForm {
    /// Circle of radius δ plus the ray integral of the variation.
    CirclePlusMinor,
    /// The two rays of the Hankel contour integrated separately.
    FullContour,
}

/// `∫_{𝓗_θ} e^{−zξ} major(ξ) dξ` along the contour coming in on the sheet
/// `θ − 2π`, around the circle `|ξ| = δ`, and out along `θ`.
pub fn laplace_hankel<F, E>(
    major: F,
    certificate: (f64, f64),
    theta: Direction,
    z: Complex64,
    spec: &QuadratureSpec,
    form: HankelForm,
) -> Result<LaplaceResult, LaplaceError>
where
    F: Fn(SurfacePoint) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    spec.validate()?;
    let kappa = theta.decay(z);
    if !(kappa > 0.0) {
        return Err(LaplaceError::NotAdmissible {
            z,
            theta: theta.theta,
            decay: kappa,
        });
    }
    let delta = spec.hankel_delta;
    let th = theta.theta;
    let circle = integrate_try(
        |phi| {
            let p = SurfacePoint::new(delta, phi);
            let xi = p.to_complex();
            major(p).map(|f| (-z * xi).exp() * f * Complex64::i() * xi)
        },
        &[th - 2.0 * PI, th - 1.5 * PI, th - PI, th - 0.5 * PI, th],
        spec,
    )?;
    // the variation obeys the minor's certificate; each side of it obeys a
    // doubled one
    let (r, tail) = truncation_radius(kappa, 2.0 * certificate.0, 2.0 * certificate.1, spec)?;
    let e = Complex64::from_polar(1.0, th);
    let breaks = radial_breaks(delta, r);
    let rays = match form {
        HankelForm::CirclePlusMinor => integrate_try(
            |s| {
                let out = major(SurfacePoint::new(s, th))?;
                let inc = major(SurfacePoint::new(s, th - 2.0 * PI))?;
                Ok::<_, E>((-z * e * s).exp() * (out - inc) * e)
            },
            &breaks,
            spec,
        )?,
        HankelForm::FullContour => {
            let out = integrate_try(
                |s| major(SurfacePoint::new(s, th)).map(|f| (-z * e * s).exp() * f * e),
                &breaks,
                spec,
            )?;
            let inc = integrate_try(
                |s| major(SurfacePoint::new(s, th - 2.0 * PI)).map(|f| (-z * e * s).exp() * f * e),
                &breaks,
                spec,
            )?;
            out.join(inc.scale(Complex64::new(-1.0, 0.0)))
        }
    };
    Ok(LaplaceResult::from_parts(circle.join(rays), r, tail))
}

/// `(1/2πi)∫ e^{zξ} ρ(ξ) dξ` over the contour coming from `∞e^{i(θ−π/2−α)}`
/// to the vertex `δe^{iθ}` and leaving towards `∞e^{i(θ+π/2+α)}`, a Cauchy
/// deformation of the Hankel contour around the ray `θ + π`. With
/// `ρ(ξ) = −2πi·φ̌(e^{−iπ}ξ)` this equals the Laplace transform of the major
/// `φ̌` in direction `θ`. `ρ` must be analytic off the ray `θ + π` and satisfy
/// `|ρ(ξ)| ≤ A|ξ| + B` on the arms.
pub fn laplace_real_major<F, E>(
    rmajor: F,
    certificate: (f64, f64),
    theta: Direction,
    z: Complex64,
    spec: &QuadratureSpec,
) -> Result<LaplaceResult, LaplaceError>
where
    F: Fn(SurfacePoint) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    spec.validate()?;
    let th = theta.theta;
    let phi = z.arg() + th;
    if !(phi.abs() < PI / 2.0) || z.norm() == 0.0 {
        return Err(LaplaceError::NotAdmissible {
            z,
            theta: th,
            decay: theta.decay(z),
        });
    }
    let alpha = PI / 4.0 + phi.abs() / 2.0;
    let vertex = Complex64::from_polar(spec.hankel_delta, th);
    let growth = (z * vertex).re.exp();
    let mut total = QuadResult::zero();
    let mut radius: f64 = 0.0;
    let mut tail_total = 0.0;
    for (sign, arm_dir) in [(-1.0, th - PI / 2.0 - alpha), (1.0, th + PI / 2.0 + alpha)] {
        let d = Complex64::from_polar(1.0, arm_dir);
        let kappa = -(z * d).re;
        let a = certificate.0 * growth;
        let b = (certificate.0 * spec.hankel_delta + certificate.1) * growth;
        let (r, tail) = truncation_radius(kappa, a, b, spec)?;
        let breaks = radial_breaks(0.0, r);
        let q = integrate_try(
            |s| {
                let xi = vertex + d * s;
                let p = SurfacePoint::from_complex_near(xi, th);
                rmajor(p).map(|f| (z * xi).exp() * f * d * sign)
            },
            &breaks,
            spec,
        )?;
        total = total.join(q);
        radius = radius.max(r);
        tail_total += tail;
    }
    let total = total.scale(Complex64::new(0.0, -1.0 / (2.0 * PI)));
    Ok(LaplaceResult::from_parts(
        total,
        radius,
        tail_total / (2.0 * PI),
    ))
}

/// The major `Ǐ_c` whose variation is `ξ^{c−1}/Γ(c)`:
/// `ξ^{c−1}/((1 − e^{−2πic})Γ(c))`, or `ξ^{n−1} log ξ/(2πi Γ(n))` for a
/// positive integer `n`.
pub fn major_monomial(
    c: Complex64,
) -> impl Fn(SurfacePoint) -> Result<Complex64, ReferenceError> + Sync {
    move |xi: SurfacePoint| {
        let g = gamma_ref(c)?.value;
        let pow = xi.powc(c - 1.0);
        let n = c.re.round();
        if c.im == 0.0 && c.re == n && n >= 1.0 {
            Ok(pow * xi.ln() / (2.0 * PI * Complex64::i() * g))
        } else {
            let denom = 1.0 - (-2.0 * PI * Complex64::i() * c).exp();
            Ok(pow / (denom * g))
        }
    }
}

/// `ξ^{c−1}/Γ(c)`.
pub fn minor_monomial(
    c: Complex64,
) -> impl Fn(SurfacePoint) -> Result<Complex64, ReferenceError> + Sync {
    move |xi: SurfacePoint| Ok(xi.powc(c - 1.0) / gamma_ref(c)?.value)
}

/// Directional sums glued over an interval of directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GluedSector {
    pub lo: f64,
    pub hi: f64,
    pub value: Complex64,
    pub max_mismatch: f64,
}

impl GluedSector {
    /// Direction of the interval with the fastest decay for `z`, which is the
    /// one to use when evaluating the glued function there.
    pub fn best_direction(&self, z: Complex64) -> Direction {
        let ideal = -z.arg();
        let t = ideal.clamp(self.lo, self.hi);
        Direction::new(t)
    }
}

/// Check that Laplace sums at the same `z` in several directions agree to
/// `10·rel_tol`; otherwise a Stokes line separates them.
pub fn glue_directions(
    results: &[(Direction, Complex64)],
    rel_tol: f64,
) -> Result<GluedSector, LaplaceError> {
    let Some(&(first_dir, first)) = results.first() else {
        return Err(LaplaceError::Invalid("no directions to glue".into()));
    };
    let mut max_mismatch: f64 = 0.0;
    for (i, &(d1, v1)) in results.iter().enumerate() {
        for &(d2, v2) in &results[i + 1..] {
            let mismatch = (v1 - v2).norm() / v1.norm().max(v2.norm()).max(f64::MIN_POSITIVE);
            if mismatch > 10.0 * rel_tol {
                return Err(LaplaceError::StokesJump {
                    theta1: d1.theta,
                    theta2: d2.theta,
                    mismatch,
                });
            }
            max_mismatch = max_mismatch.max(mismatch);
        }
    }
    let lo = results
        .iter()
        .map(|r| r.0.theta)
        .fold(first_dir.theta, f64::min);
    let hi = results
        .iter()
        .map(|r| r.0.theta)
        .fold(first_dir.theta, f64::max);
    Ok(GluedSector {
        lo,
        hi,
        value: first,
        max_mismatch,
    })
}

/// Offset of the lateral directions from the singular direction `π/2`.
pub const LATERAL_OFFSET: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StokesReport {
    pub z: Complex64,
    /// Sum on the right of the singular direction.
    pub l_j1: LaplaceResult,
    /// Sum on the left of it.
    pub l_j2: LaplaceResult,
    /// `1/(1 − e^{−2πiz})`.
    pub factor: Complex64,
    /// `|L^{J1} − factor·L^{J2}| / |L^{J1}|`.
    pub identity_residual: f64,
    pub gamma_z: Complex64,
    pub gamma_one_minus_z: Complex64,
    /// `|Γ(z)Γ(1−z) sin(πz)/π − 1|` from the two lateral sums alone.
    pub reflection_residual: f64,
}

/// Lateral Laplace sums of `λ̂_{3/2}` on both sides of `iℝ₊` at `z` with
/// `−π < arg z < 0`, and Euler's reflection formula rebuilt from them:
/// `L^{J1}(z) = z^{−3/2}λ(z)` gives `Γ(z)`, and `L^{J2}(z) = −i/λ_{−3/2}(e^{iπ}z)`
/// gives `Γ(−z)`.
pub fn stokes_check(z: Complex64, spec: &QuadratureSpec) -> Result<StokesReport, LaplaceError> {
    let arg = z.arg();
    if !(arg > -PI && arg < 0.0) {
        return Err(LaplaceError::Invalid(format!(
            "stokes needs −π < arg z < 0, got {arg}"
        )));
    }
    let f = BorelFunction::new(BorelKind::MinorLambda32);
    let l_j1 = laplace_borel(&f, Direction::new(PI / 2.0 - LATERAL_OFFSET), z, spec)?;
    let l_j2 = laplace_borel(&f, Direction::new(PI / 2.0 + LATERAL_OFFSET), z, spec)?;
    let i = Complex64::i();
    let factor = 1.0 / (1.0 - (-2.0 * PI * i * z).exp());
    let identity_residual = (l_j1.value - factor * l_j2.value).norm() / l_j1.value.norm();
    let sqrt_2pi = (2.0 * PI).sqrt();
    let gamma_z = sqrt_2pi * ((z + 1.0) * z.ln() - z).exp() * l_j1.value;
    let w = SurfacePoint::from_complex(z).rotate(PI);
    let lambda_w = -i / (w.powc(Complex64::new(1.5, 0.0)) * l_j2.value);
    let wc = w.to_complex();
    let gamma_w = sqrt_2pi * ((wc - 0.5) * w.ln() - wc).exp() * lambda_w;
    let gamma_one_minus_z = -z * gamma_w;
    let reflection_residual = (gamma_z * gamma_one_minus_z * (PI * z).sin() / PI - 1.0).norm();
    Ok(StokesReport {
        z,
        l_j1,
        l_j2,
        factor,
        identity_residual,
        gamma_z,
        gamma_one_minus_z,
        reflection_residual,
    })
}
