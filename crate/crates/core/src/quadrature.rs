//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands.
//!
//! Panels are refined in rounds. Within a round the new panels are
//! independent and may be evaluated on the rayon pool; the result vector is
//! kept in interval order and summed with a compensated sum, so the value is
//! bit-for-bit the same whether or not the pool is used.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Truncation radius for integrals to infinity.
    pub max_radius: f64,
    /// Radius of the small circle in Hankel contours.
    pub hankel_delta: f64,
    /// Cap on the number of panels of one adaptive integral.
    pub max_subdivisions: usize,
    /// Evaluate panels on the rayon pool (needs the `parallel` feature).
    pub parallel: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-15,
            max_radius: 400.0,
            hankel_delta: 1.0,
            max_subdivisions: 4000,
            parallel: true,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.hankel_delta = delta;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    pub fn validate(&self) -> Result<(), QuadError> {
        let bad = |m: &str| Err(QuadError::InvalidSpec(m.to_string()));
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return bad("rel_tol and abs_tol must be positive");
        }
        if !(self.max_radius > 0.0) || !self.max_radius.is_finite() {
            return bad("max_radius must be positive and finite");
        }
        if !(self.hankel_delta > 0.0 && self.hankel_delta < 2.0 * PI) {
            return bad("hankel_delta must lie in (0, 2π)");
        }
        if self.max_subdivisions == 0 {
            return bad("max_subdivisions must be at least 1");
        }
        Ok(())
    }

    fn use_pool(&self) -> bool {
        cfg!(feature = "parallel") && self.parallel
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub est_error: f64,
    pub panels: usize,
}

impl QuadResult {
    pub fn zero() -> Self {
        QuadResult {
            value: Complex64::new(0.0, 0.0),
            est_error: 0.0,
            panels: 0,
        }
    }

    /// Sum of two pieces of one contour.
    pub fn join(self, other: QuadResult) -> QuadResult {
        QuadResult {
            value: self.value + other.value,
            est_error: self.est_error + other.est_error,
            panels: self.panels + other.panels,
        }
    }

    pub fn scale(self, s: Complex64) -> QuadResult {
        QuadResult {
            value: self.value * s,
            est_error: self.est_error * s.norm(),
            panels: self.panels,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadError {
    #[error("invalid quadrature spec: {0}")]
    InvalidSpec(String),
    #[error("quadrature did not converge after {panels} panels (value {value}, error estimate {est_error:e})")]
    NoConvergence {
        value: Complex64,
        est_error: f64,
        panels: usize,
    },
    #[error("integrand is not finite at t = {at}")]
    NonFinite { at: f64 },
    #[error("integrand failed at t = {at}: {message}")]
    Integrand { at: f64, message: String },
    #[error("tail bound {bound:e} exceeds abs_tol within max_radius {max_radius}")]
    TailUnattainable { bound: f64, max_radius: f64 },
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    err: f64,
    /// `∫|f|` over the panel, for the rounding floor.
    abs: f64,
}

/// Accuracy floor relative to `∫|f|`: cancellation between large parts of
/// the integrand cannot be resolved below this.
const ROUNDOFF: f64 = 50.0 * f64::EPSILON;

fn gk15<F, E>(f: &F, a: f64, b: f64) -> Result<Panel, QuadError>
where
    F: Fn(f64) -> Result<Complex64, E>,
    E: std::fmt::Display,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |t: f64| -> Result<Complex64, QuadError> {
        let v = f(t).map_err(|e| QuadError::Integrand {
            at: t,
            message: e.to_string(),
        })?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFinite { at: t })
        }
    };
    let fc = eval(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs = fc.norm() * WGK[7];
    for i in 0..7 {
        let x = h * XGK[i];
        let (l, r) = (eval(c - x)?, eval(c + x)?);
        let s = l + r;
        kron += s * WGK[i];
        abs += (l.norm() + r.norm()) * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).norm();
    Ok(Panel {
        a,
        b,
        value,
        err,
        abs: abs * h.abs(),
    })
}

#[cfg(feature = "parallel")]
fn eval_panels<F, E>(f: &F, cuts: &[(f64, f64)], pool: bool) -> Result<Vec<Panel>, QuadError>
where
    F: Fn(f64) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    use rayon::prelude::*;
    if pool && cuts.len() > 1 {
        cuts.par_iter().map(|&(a, b)| gk15(f, a, b)).collect()
    } else {
        cuts.iter().map(|&(a, b)| gk15(f, a, b)).collect()
    }
}

#[cfg(not(feature = "parallel"))]
fn eval_panels<F, E>(f: &F, cuts: &[(f64, f64)], _pool: bool) -> Result<Vec<Panel>, QuadError>
where
    F: Fn(f64) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    cuts.iter().map(|&(a, b)| gk15(f, a, b)).collect()
}

/// Compensated complex sum (Neumaier), in slice order.
pub fn stable_sum<I: IntoIterator<Item = Complex64>>(items: I) -> Complex64 {
    fn add(sum: &mut f64, comp: &mut f64, x: f64) {
        let t = *sum + x;
        if sum.abs() >= x.abs() {
            *comp += (*sum - t) + x;
        } else {
            *comp += (x - t) + *sum;
        }
        *sum = t;
    }
    let (mut re, mut cre, mut im, mut cim) = (0.0, 0.0, 0.0, 0.0);
    for z in items {
        add(&mut re, &mut cre, z.re);
        add(&mut im, &mut cim, z.im);
    }
    Complex64::new(re + cre, im + cim)
}

fn totals(panels: &[Panel]) -> (Complex64, f64, f64) {
    let value = stable_sum(panels.iter().map(|p| p.value));
    let err = panels.iter().map(|p| p.err).sum();
    let abs = panels.iter().map(|p| p.abs).sum();
    (value, err, abs)
}

/// Adaptive integral of a fallible integrand over `[breaks[0], breaks[last]]`;
/// the interior break points seed the initial partition.
pub fn integrate_try<F, E>(
    f: F,
    breaks: &[f64],
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    spec.validate()?;
    if breaks.len() < 2 {
        return Ok(QuadResult::zero());
    }
    let pool = spec.use_pool();
    let cuts: Vec<(f64, f64)> = breaks.windows(2).map(|w| (w[0], w[1])).collect();
    let mut panels = eval_panels(&f, &cuts, pool)?;
    loop {
        let (value, err, abs) = totals(&panels);
        let tol = spec
            .abs_tol
            .max(spec.rel_tol * value.norm())
            .max(ROUNDOFF * abs);
        if err <= tol {
            return Ok(QuadResult {
                value,
                est_error: err,
                panels: panels.len(),
            });
        }
        let budget = spec.max_subdivisions.saturating_sub(panels.len());
        let share = tol / panels.len() as f64;
        let mut order: Vec<usize> = (0..panels.len())
            .filter(|&i| {
                let p = &panels[i];
                let m = 0.5 * (p.a + p.b);
                p.err > share && m > p.a.min(p.b) && m < p.a.max(p.b)
            })
            .collect();
        if budget == 0 || order.is_empty() {
            return Err(QuadError::NoConvergence {
                value,
                est_error: err,
                panels: panels.len(),
            });
        }
        order.sort_by(|&i, &j| panels[j].err.total_cmp(&panels[i].err).then(i.cmp(&j)));
        order.truncate(budget);
        order.sort_unstable();
        let mut cuts = Vec::with_capacity(2 * order.len());
        for &i in &order {
            let p = panels[i];
            let m = 0.5 * (p.a + p.b);
            cuts.push((p.a, m));
            cuts.push((m, p.b));
        }
        let fresh = eval_panels(&f, &cuts, pool)?;
        let mut next = Vec::with_capacity(panels.len() + order.len());
        let mut k = 0;
        for (i, p) in panels.iter().enumerate() {
            if k < order.len() && order[k] == i {
                next.push(fresh[2 * k]);
                next.push(fresh[2 * k + 1]);
                k += 1;
            } else {
                next.push(*p);
            }
        }
        panels = next;
    }
}

pub fn integrate<F>(f: F, breaks: &[f64], spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    integrate_try(|t| Ok::<_, std::convert::Infallible>(f(t)), breaks, spec)
}

/// `∫ f(z) dz` along the straight segment `z0 → z1`.
pub fn integrate_segment<F, E>(
    f: F,
    z0: Complex64,
    z1: Complex64,
    spec: &QuadratureSpec,
) -> Result<QuadResult, QuadError>
where
    F: Fn(Complex64) -> Result<Complex64, E> + Sync,
    E: std::fmt::Display,
{
    let d = z1 - z0;
    integrate_try(|t| f(z0 + d * t).map(|v| v * d), &[0.0, 0.5, 1.0], spec)
}

/// Trapezoid rule for a smooth `2π`-periodic integrand over one period,
/// doubling the node count until two successive values agree.
pub fn integrate_periodic<F>(f: F, spec: &QuadratureSpec) -> Result<QuadResult, QuadError>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    spec.validate()?;
    let rule = |n: usize| -> Result<Complex64, QuadError> {
        let h = 2.0 * PI / n as f64;
        let vals: Vec<Complex64> = map_maybe_parallel(n, spec.use_pool(), |j| f(h * j as f64));
        if let Some(j) = vals.iter().position(|v| !v.is_finite()) {
            return Err(QuadError::NonFinite { at: h * j as f64 });
        }
        Ok(stable_sum(vals) * h)
    };
    let mut n = 32;
    let mut prev = rule(n)?;
    while n < 64 * spec.max_subdivisions.max(16) {
        n *= 2;
        let cur = rule(n)?;
        let err = (cur - prev).norm();
        if err <= spec.abs_tol.max(spec.rel_tol * cur.norm()) {
            return Ok(QuadResult {
                value: cur,
                est_error: err,
                panels: n,
            });
        }
        prev = cur;
    }
    Err(QuadError::NoConvergence {
        value: prev,
        est_error: f64::NAN,
        panels: n,
    })
}

fn map_maybe_parallel<T, F>(n: usize, pool: bool, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if pool {
            return (0..n).into_par_iter().map(&f).collect();
        }
    }
    let _ = pool;
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn polynomial_is_exact_on_one_panel() {
        let spec = QuadratureSpec::default();
        let r = integrate(|t| c(t.powi(6), 2.0 * t), &[0.0, 1.0], &spec).unwrap();
        assert!((r.value - c(1.0 / 7.0, 1.0)).norm() < 1e-15);
        assert_eq!(r.panels, 1);
    }

    #[test]
    fn oscillatory_and_singular_integrands() {
        let spec = QuadratureSpec::default();
        let r = integrate(|t| Complex64::new(0.0, 10.0 * t).exp(), &[0.0, 1.0], &spec).unwrap();
        let exact = (Complex64::new(0.0, 10.0).exp() - 1.0) / Complex64::new(0.0, 10.0);
        assert!((r.value - exact).norm() < 1e-13);
        let r = integrate(|t| c(t.sqrt().ln(), 0.0), &[0.0, 1.0], &spec).unwrap();
        assert!((r.value.re + 0.5).abs() < 1e-11);
    }

    #[test]
    fn segments_integrate_analytic_functions() {
        let spec = QuadratureSpec::default();
        let r = integrate_segment(
            |z| Ok::<_, String>(z.exp()),
            c(0.0, 0.0),
            c(1.0, 1.0),
            &spec,
        )
        .unwrap();
        assert!((r.value - (c(1.0, 1.0).exp() - 1.0)).norm() < 1e-14);
    }

    #[test]
    fn periodic_rule_gives_residues() {
        let spec = QuadratureSpec::default();
        // (1/2πi)∮ dz/z over the unit circle
        let r = integrate_periodic(
            |t| {
                let z = Complex64::from_polar(1.0, t);
                Complex64::i() * z / z
            },
            &spec,
        )
        .unwrap();
        assert!((r.value / (2.0 * PI * Complex64::i()) - 1.0).norm() < 1e-15);
    }

    #[test]
    fn failures_are_reported() {
        let spec = QuadratureSpec {
            max_subdivisions: 8,
            ..Default::default()
        };
        let e = integrate(|t| c(1.0 / t, 0.0), &[0.0, 1.0], &spec).unwrap_err();
        assert!(matches!(e, QuadError::NoConvergence { .. }));
        let e = integrate(
            |t| c(if t > 0.5 { f64::NAN } else { 1.0 }, 0.0),
            &[0.0, 1.0],
            &spec,
        )
        .unwrap_err();
        assert!(matches!(e, QuadError::NonFinite { .. }));
        let bad = QuadratureSpec {
            hankel_delta: 7.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn pool_and_sequential_agree_bitwise() {
        let f = |t: f64| {
            c(
                (t * 7.0).sin() / (1.0 + t * t),
                (t * 3.0).cos() * (-t).exp(),
            )
        };
        let par = integrate(f, &[0.0, 3.0, 40.0], &QuadratureSpec::default()).unwrap();
        let seq = integrate(
            f,
            &[0.0, 3.0, 40.0],
            &QuadratureSpec::default().sequential(),
        )
        .unwrap();
        assert_eq!(par.value.re.to_bits(), seq.value.re.to_bits());
        assert_eq!(par.value.im.to_bits(), seq.value.im.to_bits());
        assert_eq!(par.panels, seq.panels);
    }
}
