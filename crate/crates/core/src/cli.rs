//! Command-line front end. `main.rs` only parses arguments and maps
//! [`CliError`] to exit codes; everything else lives here so it can be
//! tested in-process.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::borelplane::{
    alien, alien_plus, base_germ, compare_germs, export_grid_csv, polar_grid, BorelFunction,
    BorelKind, GermSampling,
};
use crate::exactseries::{a_coefficients, lambda_tilde, stirling_series};
use crate::laplace::{
    laplace_borel, laplace_real_major, stokes_check, Direction, LaplaceError, LATERAL_OFFSET,
};
use crate::quadrature::QuadratureSpec;
use crate::realmajor::{
    minor_lambda1_contour, rho_continue, rho_lambda_c, rho_nu_c, CIndex, RealMajorError,
};
use crate::records::{
    pair, record_csv, AlienRecord, CoeffsRecord, LaplaceRecord, ResumRecord, StokesRecord,
    VerifyReport,
};
use crate::reference::{lambda_ref, ln_lambda};
use crate::surface::SurfacePoint;
use crate::verify::{run_suite, Suite};

/// Smallest `|Im z|` accepted by `stokes`.
pub const STOKES_AXIS_CLEARANCE: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
    #[error("verification failed")]
    VerificationFailed,
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerificationFailed => 1,
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl From<LaplaceError> for CliError {
    fn from(e: LaplaceError) -> Self {
        match e {
            LaplaceError::NotAdmissible { .. } | LaplaceError::Invalid(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<RealMajorError> for CliError {
    fn from(e: RealMajorError) -> Self {
        match e {
            RealMajorError::InvalidIndex { .. }
            | RealMajorError::InvalidXi(_)
            | RealMajorError::Collision { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

fn numerical<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Parse `RE+IMj`, `RE`, `IMj` or polar `R@THETA`.
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t = s.trim();
    let bad = || format!("cannot parse {s:?} as a complex number (use RE+IMj or R@THETA)");
    if let Some((r, th)) = t.split_once('@') {
        let r: f64 = r.trim().parse().map_err(|_| bad())?;
        let th: f64 = th.trim().parse().map_err(|_| bad())?;
        return Ok(Complex64::from_polar(r, th));
    }
    let Some(body) = t.strip_suffix(['j', 'i']) else {
        return t
            .parse::<f64>()
            .map(|x| Complex64::new(x, 0.0))
            .map_err(|_| bad());
    };
    // split at the last sign that is not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "resurge",
    version,
    about = "Resurgence of the Gamma-function normalization: coefficients, Borel-Laplace resummation, Stokes data"
)]
pub struct Cli {
    /// Relative tolerance of every quadrature.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Series truncation order.
    #[arg(long, global = true, default_value_t = 12)]
    pub order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact a_k, the lambda and Stirling series, and the exp identity.
    Coeffs {
        #[arg(long, default_value_t = 7)]
        kmax: usize,
    },
    /// Laplace resummation compared with the reference oracle.
    Resum(ResumArgs),
    /// Lateral sums across the singular direction and the reflection formula.
    Stokes {
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        z: Complex64,
    },
    /// Real-major integrals, their continuation, and the lambda_1 contour formula.
    Realmajor(RealMajorArgs),
    /// Alien operators at 2*pi*i*m, or a CSV grid of a Borel-plane function.
    Alien(AlienArgs),
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = clap::builder::ValueParser::new(|s: &str| s.parse::<Suite>()))]
        suite: Suite,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResumObject {
    Lambda32,
    Chi,
    Mu,
    RealmajorC,
}

#[derive(Debug, Args)]
pub struct ResumArgs {
    #[arg(value_enum)]
    pub object: ResumObject,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Index c of the real-major (realmajor-c only).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    pub c: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RealMajorKernel {
    Lambda,
    Nu,
    Lambda1Contour,
}

#[derive(Debug, Args)]
pub struct RealMajorArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub xi: Complex64,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    pub c: Complex64,
    #[arg(long, value_enum, default_value_t = RealMajorKernel::Lambda)]
    pub kernel: RealMajorKernel,
    /// Comma-separated intermediate points: continue from the first point
    /// through these to `--xi` (lambda kernel only).
    #[arg(long, value_parser = parse_complex, value_delimiter = ',', allow_hyphen_values = true)]
    pub path: Option<Vec<Complex64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlienOperator {
    Plus,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlienKind {
    Lambda32,
    Chi,
}

#[derive(Debug, Args)]
pub struct AlienArgs {
    /// Singular point 2*pi*i*m.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1)]
    pub m: i64,
    #[arg(long, value_enum, default_value_t = AlienOperator::Delta)]
    pub operator: AlienOperator,
    #[arg(long, value_enum, default_value_t = AlienKind::Lambda32)]
    pub kind: AlienKind,
    /// Emit a CSV sample grid of the minor instead, up to this radius.
    #[arg(long)]
    pub grid: Option<f64>,
    /// Number of radii and of angles in the grid.
    #[arg(long, default_value_t = 16)]
    pub grid_n: usize,
    /// Angular range of the grid on the Riemann surface of the logarithm.
    #[arg(long, default_value_t = -PI, allow_hyphen_values = true)]
    pub sheet_min: f64,
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    pub sheet_max: f64,
}

/// A finished command: its serialized output and whether it counts as a
/// verification failure.
pub struct Output {
    pub text: String,
    pub failed: bool,
}

fn render<T: Serialize>(record: &T, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(record).map_err(numerical)? + "\n"),
        Format::Csv => {
            let mut buf = Vec::new();
            record_csv(record, &mut buf)?;
            Ok(String::from_utf8(buf).expect("CSV is UTF-8"))
        }
    }
}

fn spec_from(cli: &Cli) -> Result<QuadratureSpec, CliError> {
    let spec = QuadratureSpec::default().with_rel_tol(cli.tol);
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let spec = spec_from(cli)?;
    let ok = |text| {
        Ok(Output {
            text,
            failed: false,
        })
    };
    match &cli.command {
        Command::Coeffs { kmax } => ok(coeffs(*kmax, cli.order, cli.format)?),
        Command::Resum(a) => ok(resum(a, &spec, cli.format)?),
        Command::Stokes { z } => ok(stokes(*z, &spec, cli.format)?),
        Command::Realmajor(a) => ok(realmajor(a, &spec, cli.format)?),
        Command::Alien(a) => ok(alien_cmd(a, cli.format)?),
        Command::Verify { suite } => {
            let report = run_suite(*suite, &spec);
            Ok(Output {
                text: verify_text(&report, cli.format)?,
                failed: !report.passed,
            })
        }
    }
}

/// Run and write the output; the error carries the exit code.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let out = run(cli)?;
    match &cli.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(out.text.as_bytes())?;
            w.flush()?;
        }
        None => io::stdout().write_all(out.text.as_bytes())?,
    }
    if out.failed {
        Err(CliError::VerificationFailed)
    } else {
        Ok(())
    }
}

fn coeffs(kmax: usize, order: usize, format: Format) -> Result<String, CliError> {
    if kmax < 1 {
        return Err(CliError::Usage("kmax must be at least 1".into()));
    }
    let a = a_coefficients(kmax.max(2 * order + 1));
    let lt = lambda_tilde(order);
    let mu = stirling_series(order);
    let e = mu.exp().map_err(numerical)?;
    let residual: Vec<String> = (0..=order)
        .map(|n| {
            (e.coeff(n).cloned().unwrap_or_default() - lt.coeff(n).cloned().unwrap_or_default())
                .to_string()
        })
        .collect();
    let rec = CoeffsRecord {
        kmax,
        order,
        a: a[..kmax].iter().map(|r| r.to_string()).collect(),
        lambda_tilde: lt.coeffs().iter().map(|r| r.to_string()).collect(),
        mu_tilde: mu.coeffs().iter().map(|r| r.to_string()).collect(),
        exp_identity_holds: residual.iter().all(|r| r == "0"),
        exp_residual: residual,
    };
    match format {
        Format::Json => render(&rec, format),
        Format::Csv => {
            let mut s = String::from("series,index,value\n");
            for (k, v) in rec.a.iter().enumerate() {
                s += &format!("a,{},{v}\n", k + 1);
            }
            for (name, list) in [
                ("lambda_tilde", &rec.lambda_tilde),
                ("mu_tilde", &rec.mu_tilde),
                ("exp_residual", &rec.exp_residual),
            ] {
                for (n, v) in list.iter().enumerate() {
                    s += &format!("{name},{n},{v}\n");
                }
            }
            Ok(s)
        }
    }
}

fn resum(a: &ResumArgs, spec: &QuadratureSpec, format: Format) -> Result<String, CliError> {
    let z = a.z;
    let oracle_ok = a.theta.abs() < PI / 2.0;
    let (name, value, oracle, qpath) = match a.object {
        ResumObject::RealmajorC => {
            if a.theta != 0.0 {
                return Err(CliError::Usage(
                    "realmajor-c is resummed in direction 0 only".into(),
                ));
            }
            let c = CIndex::new(a.c);
            let rho = |xi: SurfacePoint| rho_lambda_c(c, xi.to_complex(), spec).map(|v| v.value);
            let r = laplace_real_major(rho, (0.0, 3.0), Direction::new(0.0), z, spec)?;
            (
                format!("realmajor_c={}", a.c),
                r,
                lambda_ref(z, a.c).map_err(numerical)?,
                None,
            )
        }
        obj => {
            let (kind, name) = match obj {
                ResumObject::Lambda32 => (BorelKind::MinorLambda32, "lambda32"),
                ResumObject::Chi => (BorelKind::MinorChi, "chi"),
                _ => (BorelKind::MinorMu, "mu"),
            };
            let r = laplace_borel(&BorelFunction::new(kind), Direction::new(a.theta), z, spec)?;
            let lam = lambda_ref(z, Complex64::new(0.0, 0.0)).map_err(numerical)?;
            let oracle = match obj {
                ResumObject::Lambda32 => z.powf(-1.5) * lam,
                ResumObject::Chi => z.powf(-1.5) / lam,
                _ => ln_lambda(z).map_err(numerical)?,
            };
            (name.to_string(), r, oracle, None::<usize>)
        }
    };
    let mut record = LaplaceRecord::from_laplace(z, a.theta, &value);
    record.qpath_nodes = qpath;
    let rel_error = if oracle_ok {
        (value.value - oracle).norm() / oracle.norm()
    } else {
        f64::NAN
    };
    render(
        &ResumRecord {
            object: name,
            record,
            oracle: pair(oracle),
            rel_error,
        },
        format,
    )
}

fn stokes(z: Complex64, spec: &QuadratureSpec, format: Format) -> Result<String, CliError> {
    if z.im.abs() < STOKES_AXIS_CLEARANCE {
        return Err(CliError::Usage(format!(
            "z = {z} is within {STOKES_AXIS_CLEARANCE} of the real axis"
        )));
    }
    let arg = z.arg();
    if !(arg > -PI && arg < 0.0) {
        return Err(CliError::Usage(format!(
            "stokes needs -pi < arg z < 0, got {arg}"
        )));
    }
    let r = stokes_check(z, spec)?;
    render(
        &StokesRecord::new(&r, PI / 2.0 - LATERAL_OFFSET, PI / 2.0 + LATERAL_OFFSET),
        format,
    )
}

/// Argument of the end of a polyline, followed continuously from the
/// principal argument of its start.
fn unwrapped_arg(path: &[Complex64]) -> f64 {
    let mut th = path[0].arg();
    for w in path.windows(2) {
        th += (w[1] / w[0]).arg();
    }
    th
}

fn realmajor(a: &RealMajorArgs, spec: &QuadratureSpec, format: Format) -> Result<String, CliError> {
    let c = CIndex::new(a.c);
    let (value, theta) = match (a.kernel, &a.path) {
        (RealMajorKernel::Lambda, Some(points)) => {
            let mut full = points.clone();
            full.push(a.xi);
            if full.iter().any(|p| p.norm() == 0.0) {
                return Err(CliError::Usage("path passes through 0".into()));
            }
            (rho_continue(c, &full, spec)?, unwrapped_arg(&full))
        }
        (_, Some(_)) => {
            return Err(CliError::Usage(
                "--path applies to the lambda kernel only".into(),
            ))
        }
        (RealMajorKernel::Lambda, None) => (rho_lambda_c(c, a.xi, spec)?, a.xi.arg()),
        (RealMajorKernel::Nu, None) => (rho_nu_c(c, a.xi, spec)?, a.xi.arg()),
        (RealMajorKernel::Lambda1Contour, None) => (minor_lambda1_contour(a.xi, spec)?, a.xi.arg()),
    };
    render(&LaplaceRecord::from_real_major(a.xi, theta, &value), format)
}

fn alien_cmd(a: &AlienArgs, format: Format) -> Result<String, CliError> {
    let (minor, name) = match a.kind {
        AlienKind::Lambda32 => (BorelKind::MinorLambda32, "lambda32"),
        AlienKind::Chi => (BorelKind::MinorChi, "chi"),
    };
    let f = BorelFunction::new(minor);
    if let Some(rmax) = a.grid {
        if !(rmax > 0.0) || a.grid_n < 2 || !(a.sheet_min < a.sheet_max) {
            return Err(CliError::Usage(
                "grid needs a positive radius, at least 2 points and sheet_min < sheet_max".into(),
            ));
        }
        let n = a.grid_n;
        let radii: Vec<f64> = (1..=n).map(|j| rmax * j as f64 / n as f64).collect();
        let thetas: Vec<f64> = (0..n)
            .map(|j| a.sheet_min + (a.sheet_max - a.sheet_min) * j as f64 / (n - 1) as f64)
            .collect();
        let mut buf = Vec::new();
        export_grid_csv(&f, &polar_grid(&radii, &thetas), &mut buf).map_err(numerical)?;
        return Ok(String::from_utf8(buf).expect("CSV is UTF-8"));
    }
    if a.m == 0 {
        return Err(CliError::Usage("m must be nonzero".into()));
    }
    let omega = Complex64::new(0.0, 2.0 * PI * a.m as f64);
    let s = GermSampling::default();
    let germ = match a.operator {
        AlienOperator::Plus => alien_plus(&f, omega, &s),
        AlienOperator::Delta => alien(&f, omega, &s),
    }
    .map_err(numerical)?;
    let base = base_germ(&f, omega, &s).map_err(numerical)?;
    let cmp = compare_germs(&germ, &base);
    let op = match a.operator {
        AlienOperator::Plus => "delta_plus",
        AlienOperator::Delta => "delta",
    };
    render(&AlienRecord::new(name, op, &germ, &base, &cmp), format)
}

fn verify_text(report: &VerifyReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => render(report, format),
        Format::Csv => {
            let mut s = String::from("id,name,passed,residual,tolerance,seconds\n");
            for c in &report.checks {
                s += &format!(
                    "{},{},{},{:e},{:e},{:.3}\n",
                    c.id, c.name, c.passed, c.residual, c.tolerance, c.seconds
                );
            }
            Ok(s)
        }
    }
}
