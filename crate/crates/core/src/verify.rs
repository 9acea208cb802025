//! Verification suites: one check per acceptance criterion, each comparing
//! the resurgent machinery with an independent oracle (exact rationals, the
//! reference Γ, or direct quadrature). `Full` widens the sample sets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::borelplane::{
    alien, alien_plus, base_germ, compare_germs, minor_chi, minor_lambda32, variation,
    BorelFunction, BorelKind, GermSampling,
};
use crate::exactseries::{a_coefficients, lambda_tilde, stirling_series};
use crate::lambertw::{branch_of, lambert_w, on_branch_boundary, DEFAULT_TOL};
use crate::laplace::{
    laplace_borel, laplace_hankel, laplace_ray, laplace_real_major, stokes_check, Direction,
    HankelForm,
};
use crate::quadrature::QuadratureSpec;
use crate::realmajor::{
    arc_path, lambda1_taylor, rho_continue, rho_lambda_c, rho_nu_c, winding_path, CIndex,
};
use crate::records::{CheckRecord, VerifyReport};
use crate::reference::{lambda_ref, ln_lambda, nu_ref};
use crate::surface::SurfacePoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Fast,
    Full,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fast" => Ok(Suite::Fast),
            "full" => Ok(Suite::Full),
            other => Err(format!("unknown suite {other:?} (expected fast or full)")),
        }
    }
}

/// Wall-clock budget of the fast suite.
pub const FAST_BUDGET_SECONDS: f64 = 60.0;

pub const CRITERIA: [(u32, &str); 14] = [
    (1, "exact a_1..a_7"),
    (2, "exp of the Stirling series equals the lambda series"),
    (3, "Laplace of the lambda minor"),
    (4, "Laplace of the chi minor"),
    (5, "Laplace of the Stirling minor"),
    (6, "Hankel transform of the lambda major"),
    (7, "real-major round trip"),
    (8, "nu real-major"),
    (9, "contour formula Taylor coefficients"),
    (10, "Stokes relation and reflection formula"),
    (11, "alien operators"),
    (12, "chi symmetry"),
    (13, "real-major continuation and monodromy"),
    (14, "Lambert W and variation identities"),
];

struct Outcome {
    residual: f64,
    tolerance: f64,
    passed: bool,
    detail: String,
}

impl Outcome {
    fn at_most(residual: f64, tolerance: f64) -> Self {
        Outcome {
            residual,
            tolerance,
            passed: residual <= tolerance,
            detail: String::new(),
        }
    }

    fn with_time_limit(mut self, seconds: f64, limit: f64) -> Self {
        if seconds >= limit {
            self.passed = false;
            self.detail = format!("took {seconds:.2} s, limit {limit} s");
        }
        self
    }
}

type CheckResult = Result<Outcome, String>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn max(it: impl IntoIterator<Item = f64>) -> f64 {
    it.into_iter().fold(0.0, f64::max)
}

fn exact_coefficients() -> CheckResult {
    let expect = [
        "1",
        "1/3",
        "1/36",
        "-1/270",
        "1/4320",
        "1/17010",
        "-139/5443200",
    ];
    let a = a_coefficients(7);
    let bad: Vec<String> = a
        .iter()
        .zip(expect)
        .filter(|(g, e)| g.to_string() != *e)
        .map(|(g, e)| format!("{g} != {e}"))
        .collect();
    Ok(Outcome {
        residual: bad.len() as f64,
        tolerance: 0.0,
        passed: bad.is_empty(),
        detail: bad.join("; "),
    })
}

fn exp_identity(order: usize) -> CheckResult {
    let lhs = stirling_series(order).exp().map_err(err)?;
    let rhs = lambda_tilde(order);
    let mismatches = (0..=order)
        .filter(|&n| lhs.coeff(n) != rhs.coeff(n))
        .count();
    Ok(Outcome::at_most(mismatches as f64, 0.0))
}

fn laplace_minor(
    kind: BorelKind,
    zs: &[Complex64],
    oracle: impl Fn(Complex64) -> Result<Complex64, String>,
    spec: &QuadratureSpec,
) -> Result<f64, String> {
    let f = BorelFunction::new(kind);
    let mut worst: f64 = 0.0;
    for &z in zs {
        let v = laplace_borel(&f, Direction::new(0.0), z, spec)
            .map_err(err)?
            .value;
        worst = worst.max(rel(v, oracle(z)?));
    }
    Ok(worst)
}

fn lambda32_oracle(z: Complex64) -> Result<Complex64, String> {
    Ok(z.powf(-1.5) * lambda_ref(z, c(0.0, 0.0)).map_err(err)?)
}

fn criterion3(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let mut zs = vec![c(2.0, 0.0), c(5.0, 0.0), c(10.0, 0.0), c(3.0, 3.0)];
    if suite == Suite::Full {
        zs.extend([c(1.0, 0.0), c(0.5, 0.2), c(20.0, -5.0), c(1.0, -4.0)]);
    }
    Ok(Outcome::at_most(
        laplace_minor(BorelKind::MinorLambda32, &zs, lambda32_oracle, spec)?,
        1e-8,
    ))
}

fn criterion4(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let mut zs = vec![c(2.0, 0.0), c(5.0, 0.0), c(3.0, 3.0)];
    if suite == Suite::Full {
        zs.extend([c(1.0, 0.0), c(8.0, -2.0)]);
    }
    let oracle = |z: Complex64| Ok(z.powf(-1.5) / lambda_ref(z, c(0.0, 0.0)).map_err(err)?);
    Ok(Outcome::at_most(
        laplace_minor(BorelKind::MinorChi, &zs, oracle, spec)?,
        1e-8,
    ))
}

fn criterion5(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let mut zs = vec![3.0, 5.0, 10.0];
    if suite == Suite::Full {
        zs.extend([1.0, 2.0, 40.0]);
    }
    let f = BorelFunction::new(BorelKind::MinorMu);
    let mut worst: f64 = 0.0;
    for z in zs {
        let z = c(z, 0.0);
        let v = laplace_borel(&f, Direction::new(0.0), z, spec)
            .map_err(err)?
            .value;
        worst = worst.max((v - ln_lambda(z).map_err(err)?).norm());
    }
    Ok(Outcome::at_most(worst, 1e-10))
}

fn criterion6(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let zs = [c(2.0, 0.0), c(5.0, 0.0), c(10.0, 0.0), c(3.0, 3.0)];
    let f = BorelFunction::new(BorelKind::MajorLambda32);
    let minor = BorelFunction::new(BorelKind::MinorLambda32);
    let cert = f.growth_certificate();
    let forms: &[HankelForm] = if suite == Suite::Full {
        &[HankelForm::CirclePlusMinor, HankelForm::FullContour]
    } else {
        &[HankelForm::CirclePlusMinor]
    };
    let (mut match_err, mut delta_err): (f64, f64) = (0.0, 0.0);
    for z in zs {
        let ray = laplace_borel(&minor, Direction::new(0.0), z, spec)
            .map_err(err)?
            .value;
        for &form in forms {
            let vals: Vec<Complex64> = [0.1, 0.5, 1.0]
                .iter()
                .map(|&d| {
                    laplace_hankel(
                        |xi| f.eval(xi),
                        cert,
                        Direction::new(0.0),
                        z,
                        &spec.with_delta(d),
                        form,
                    )
                    .map(|r| r.value)
                })
                .collect::<Result<_, _>>()
                .map_err(err)?;
            match_err = max([match_err, rel(vals[2], ray), rel(vals[0], ray)]);
            delta_err = delta_err.max(rel(vals[0], vals[1]));
        }
    }
    let passed = match_err <= 1e-7 && delta_err <= 1e-9;
    Ok(Outcome {
        residual: match_err.max(delta_err),
        tolerance: 1e-9,
        passed,
        detail: format!("ray/Hankel mismatch {match_err:e} (tol 1e-7), delta dependence {delta_err:e} (tol 1e-9)"),
    })
}

/// `∫_0^{∞e^{iθ}} e^{−zξ} g(z) dz` of a reference function `g`.
fn direct_laplace(
    g: impl Fn(Complex64) -> Complex64 + Sync,
    xi: Complex64,
    theta: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, String> {
    laplace_ray(
        |z: SurfacePoint| Ok::<_, String>(g(z.to_complex())),
        (0.0, 3.0),
        Direction::new(theta),
        xi,
        spec,
    )
    .map(|r| r.value)
    .map_err(err)
}

fn lambda0(z: Complex64) -> Complex64 {
    lambda_ref(z, c(0.0, 0.0)).unwrap_or(Complex64::new(f64::NAN, f64::NAN))
}

fn criterion7(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let mut zs = vec![c(2.0, 0.0), c(5.0, 0.0), c(3.0, 2.0)];
    let mut xis = vec![c(0.5, 0.0), c(1.0, 0.0), c(1.0, 1.0)];
    if suite == Suite::Full {
        zs.extend([c(1.0, -1.0), c(10.0, 0.0)]);
        xis.extend([c(2.0, 0.0), c(0.2, -0.7)]);
    }
    let mut trip: f64 = 0.0;
    for z in zs {
        let rho = |xi: SurfacePoint| {
            rho_lambda_c(CIndex::real(0.0), xi.to_complex(), spec).map(|v| v.value)
        };
        let v = laplace_real_major(rho, (0.0, 3.0), Direction::new(0.0), z, spec)
            .map_err(err)?
            .value;
        trip = trip.max(rel(v, lambda0(z)));
    }
    let mut direct: f64 = 0.0;
    for xi in xis {
        let v = rho_lambda_c(CIndex::real(0.0), xi, spec)
            .map_err(err)?
            .value;
        direct = direct.max(rel(v, direct_laplace(lambda0, xi, 0.0, spec)?));
    }
    let mut o = Outcome::at_most(trip.max(direct), 1e-6);
    o.detail = format!("round trip {trip:e}, direct quadrature {direct:e}");
    Ok(o)
}

fn criterion8(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let mut xis = vec![c(0.5, 0.0), c(1.0, 0.0)];
    if suite == Suite::Full {
        xis.extend([c(3.0, 0.0), c(1.0, 1.0)]);
    }
    let nu = |z: Complex64| nu_ref(z, c(0.0, 0.0)).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    let mut worst: f64 = 0.0;
    for xi in xis {
        let v = rho_nu_c(CIndex::real(0.0), xi, spec).map_err(err)?.value;
        worst = worst.max(rel(v, direct_laplace(nu, xi, 0.0, spec)?));
    }
    Ok(Outcome::at_most(worst, 1e-6))
}

fn criterion9(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let nmax = 3;
    let radii: &[f64] = if suite == Suite::Full {
        &[0.05, 0.1]
    } else {
        &[0.05]
    };
    let a = a_coefficients(2 * nmax + 1);
    let mut worst: f64 = 0.0;
    for &radius in radii {
        let got = lambda1_taylor(radius, nmax, spec).map_err(err)?;
        let mut fact = 1.0;
        let mut dfact = 1.0;
        for (n, g) in got.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
                dfact *= (2 * n + 1) as f64;
            }
            let expect = dfact * crate::exactseries::to_f64(&a[2 * n]) / fact;
            worst = worst.max(rel(*g, c(expect, 0.0)));
        }
    }
    Ok(Outcome::at_most(worst, 1e-7))
}

fn criterion10(suite: Suite, spec: &QuadratureSpec) -> CheckResult {
    let mut zs = vec![
        Complex64::from_polar(2.0, -PI / 4.0),
        Complex64::from_polar(5.0, -PI / 3.0),
    ];
    if suite == Suite::Full {
        zs.extend([
            Complex64::from_polar(3.0, -PI / 2.0),
            Complex64::from_polar(4.0, -2.0),
        ]);
    }
    let mut worst: f64 = 0.0;
    for z in zs {
        let r = stokes_check(z, spec).map_err(err)?;
        worst = max([worst, r.identity_residual, r.reflection_residual]);
    }
    Ok(Outcome::at_most(worst, 1e-6))
}

fn criterion11(suite: Suite) -> CheckResult {
    let f = BorelFunction::new(BorelKind::MinorLambda32);
    let s = GermSampling::default();
    let i2pi = c(0.0, 2.0 * PI);
    let ratio_dev = |germ: &crate::borelplane::SingularityData,
                     omega: Complex64,
                     expect: f64|
     -> Result<f64, String> {
        let cmp = compare_germs(germ, &base_germ(&f, omega, &s).map_err(err)?);
        Ok((cmp.ratio - expect).norm() + cmp.spread)
    };
    let mut worst: f64 = 0.0;
    worst = worst.max(ratio_dev(
        &alien_plus(&f, i2pi, &s).map_err(err)?,
        i2pi,
        1.0,
    )?);
    worst = worst.max(ratio_dev(
        &alien_plus(&f, -i2pi, &s).map_err(err)?,
        -i2pi,
        -1.0,
    )?);
    let m4 = compare_germs(
        &alien_plus(&f, -2.0 * i2pi, &s).map_err(err)?,
        &base_germ(&f, -2.0 * i2pi, &s).map_err(err)?,
    );
    worst = worst.max(m4.relative_magnitude);
    let ms: &[f64] = if suite == Suite::Full {
        &[1.0, 2.0, 3.0]
    } else {
        &[1.0, 2.0]
    };
    for &m in ms {
        worst = worst.max(ratio_dev(
            &alien(&f, m * i2pi, &s).map_err(err)?,
            m * i2pi,
            1.0 / m,
        )?);
        worst = worst.max(ratio_dev(
            &alien(&f, -m * i2pi, &s).map_err(err)?,
            -m * i2pi,
            -1.0 / m,
        )?);
    }
    Ok(Outcome::at_most(worst, 1e-6))
}

/// Deterministic well-spread samples in `[0, 1)²` (golden-ratio lattice).
fn lattice(n: usize) -> impl Iterator<Item = (f64, f64)> {
    let g = 0.618_033_988_749_894_9;
    (0..n).map(move |j| ((j as f64 + 0.5) / n as f64, (j as f64 * g).fract()))
}

fn criterion12(suite: Suite) -> CheckResult {
    let n = if suite == Suite::Full { 400 } else { 20 };
    let mut worst: f64 = 0.0;
    for (u, v) in lattice(n) {
        let xi = SurfacePoint::new(0.05 + 12.0 * u, -PI + 0.05 + (PI - 0.1) * v);
        if crate::borelplane::path::distance_to_singular(xi.rotate(PI).to_complex()).1 < 0.05 {
            continue;
        }
        let a = minor_chi(xi).map_err(err)?;
        let b = Complex64::i() * minor_lambda32(xi.rotate(-PI)).map_err(err)?;
        worst = worst.max((a - b).norm());
    }
    Ok(Outcome::at_most(worst, 1e-12))
}

fn criterion13(spec: &QuadratureSpec) -> CheckResult {
    let to = 1.25 * PI;
    let v = rho_continue(CIndex::real(0.0), &arc_path(1.0, 0.0, to), spec)
        .map_err(err)?
        .value;
    let oracle = direct_laplace(lambda0, Complex64::from_polar(1.0, to), -0.875 * PI, spec)?;
    let cont = rel(v, oracle);
    let start = rho_lambda_c(CIndex::real(0.0), c(1.0, 0.0), spec)
        .map_err(err)?
        .value;
    let wound = rho_continue(CIndex::real(0.0), &winding_path(1, -1.5 * PI, 1.0), spec)
        .map_err(err)?
        .value;
    let monodromy = (wound - start).norm();
    Ok(Outcome {
        residual: cont,
        tolerance: 1e-5,
        passed: cont <= 1e-5 && monodromy > 1e-8,
        detail: format!(
            "continuation error {cont:e} (tol 1e-5), monodromy {monodromy:e} (must exceed 1e-8)"
        ),
    })
}

fn criterion14(suite: Suite) -> CheckResult {
    let n = if suite == Suite::Full { 20_000 } else { 2_000 };
    let mut lambert: f64 = 0.0;
    let mut wrong_branch = 0;
    let mut on_boundary = 0;
    for (j, (u, v)) in lattice(n).enumerate() {
        let x = Complex64::from_polar(10f64.powf(-3.0 + 6.0 * u), PI * (2.0 * v - 1.0));
        let k = (j % 7) as i32 - 3;
        let w = lambert_w(x, k, DEFAULT_TOL).map_err(err)?.w;
        lambert = lambert.max((w * w.exp() - x).norm() / x.norm());
        if on_branch_boundary(w) {
            on_boundary += 1;
        } else if branch_of(w) != k {
            wrong_branch += 1;
        }
    }
    let m = if suite == Suite::Full { 200 } else { 40 };
    let mut var: f64 = 0.0;
    for (kind, minor_kind) in [
        (BorelKind::MajorLambda32, BorelKind::MinorLambda32),
        (BorelKind::MajorChi, BorelKind::MinorChi),
    ] {
        let major = BorelFunction::new(kind);
        let minor = BorelFunction::new(minor_kind);
        for (u, v) in lattice(m) {
            let xi = SurfacePoint::new(0.05 + 8.0 * u, kind.anchor() + (2.0 * v - 1.0) * 1.4);
            let a = variation(&major, xi).map_err(err)?;
            let b = minor.eval(xi).map_err(err)?;
            var = var.max((a - b).norm() / b.norm().max(1.0));
        }
    }
    let residual = lambert.max(var);
    Ok(Outcome {
        residual,
        tolerance: 1e-12,
        passed: residual <= 1e-12 && wrong_branch == 0,
        detail: format!("Lambert residual {lambert:e}, wrong branches {wrong_branch}, on boundary {on_boundary}, variation {var:e}"),
    })
}

/// Run one criterion and time it.
pub fn run_check(id: u32, suite: Suite, spec: &QuadratureSpec) -> CheckRecord {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map_or("unknown", |c| c.1)
        .to_string();
    let t0 = Instant::now();
    let out = match id {
        1 => exact_coefficients(),
        2 => exp_identity(12),
        3 => criterion3(suite, spec),
        4 => criterion4(suite, spec),
        5 => criterion5(suite, spec),
        6 => criterion6(suite, spec),
        7 => criterion7(suite, spec),
        8 => criterion8(suite, spec),
        9 => criterion9(suite, spec),
        10 => criterion10(suite, spec),
        11 => criterion11(suite),
        12 => criterion12(suite),
        13 => criterion13(spec),
        14 => criterion14(suite),
        _ => Err(format!("no criterion {id}")),
    };
    let seconds = t0.elapsed().as_secs_f64();
    let out = out.map(|o| match id {
        1 => o.with_time_limit(seconds, 1.0),
        2 => o.with_time_limit(seconds, 5.0),
        3 => o.with_time_limit(seconds, 30.0),
        _ => o,
    });
    match out {
        Ok(o) => CheckRecord {
            id,
            name,
            passed: o.passed,
            residual: o.residual,
            tolerance: o.tolerance,
            seconds,
            detail: o.detail,
        },
        Err(e) => CheckRecord {
            id,
            name,
            passed: false,
            residual: f64::INFINITY,
            tolerance: 0.0,
            seconds,
            detail: e,
        },
    }
}

pub fn run_suite(suite: Suite, spec: &QuadratureSpec) -> VerifyReport {
    let t0 = Instant::now();
    let checks: Vec<CheckRecord> = CRITERIA
        .iter()
        .map(|&(id, _)| run_check(id, suite, spec))
        .collect();
    let seconds = t0.elapsed().as_secs_f64();
    let in_budget = suite == Suite::Full || seconds <= FAST_BUDGET_SECONDS;
    VerifyReport {
        suite: suite.to_string(),
        passed: in_budget && checks.iter().all(|c| c.passed),
        seconds,
        checks,
    }
}
