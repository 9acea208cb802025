//! Real-majors as integrals over `Q`:
//! `ρ_{λ_c}(ξ) = Γ(3/2−c)/√(2π) ∫ (ξ + e^Q − Q − 1)^{c−3/2} dQ`, the `ν`
//! variant with the extra weight `e^{Q/2}`, their analytic continuation by
//! deforming the `Q` path around the moving roots of `ξ + e^Q − Q − 1`, and
//! the closed-contour formula for `λ̂₁`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambertw::{lambert_w, LambertError, DEFAULT_TOL};
use crate::quadrature::{integrate_try, QuadError, QuadratureSpec};
use crate::reference::{gamma_ref, ReferenceError};

/// Smallest allowed distance between a `ξ` path and `2πiℤ`.
pub const XI_CLEARANCE: f64 = 0.01;
/// Smallest allowed distance between the `Q` path and a root.
pub const Q_CLEARANCE: f64 = 1e-3;
/// Roots `k ∈ −TRACKED..=TRACKED` follow the continuation.
const TRACKED: i32 = 6;
const MAX_PUSH_RADIUS: f64 = 1.0;
const MAX_SEGMENT: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealMajorError {
    #[error("index c = {c} outside the admissible half-plane Re c < {bound}")]
    InvalidIndex { c: Complex64, bound: f64 },
    #[error("ξ = {0} is not allowed here")]
    InvalidXi(Complex64),
    #[error("ξ path comes within {distance:e} of the critical value {omega}")]
    Collision { omega: Complex64, distance: f64 },
    #[error("root tracking failed near ξ = {0}")]
    Tracking(Complex64),
    #[error("branch tracking failed: {0}")]
    Branch(String),
    #[error("tail truncation needs T = {0}, beyond the overflow limit")]
    TailUnattainable(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Lambert(#[from] LambertError),
    #[error(transparent)]
    Reference(#[from] ReferenceError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CIndex {
    pub c: Complex64,
}

impl CIndex {
    pub fn new(c: Complex64) -> Self {
        CIndex { c }
    }

    pub fn real(c: f64) -> Self {
        CIndex {
            c: Complex64::new(c, 0.0),
        }
    }

    fn check(&self, bound: f64) -> Result<(), RealMajorError> {
        if self.c.re < bound && self.c.is_finite() {
            Ok(())
        } else {
            Err(RealMajorError::InvalidIndex { c: self.c, bound })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `(ξ+P)^{c−3/2}`.
    Lambda,
    /// `(ξ+P)^{c−3/2} e^{Q/2}`.
    Nu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealMajorValue {
    pub value: Complex64,
    pub est_error: f64,
    pub panels: usize,
    pub qpath_nodes: usize,
}

/// Piecewise-linear integration path in the `Q`-plane from `−tail_left` to
/// `+tail_right`; the tails beyond are handled analytically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QPath {
    pub nodes: Vec<Complex64>,
    pub tail_left: f64,
    pub tail_right: f64,
}

/// `e^Q − Q − 1` without cancellation near `Q = 0`.
pub fn p_of(q: Complex64) -> Complex64 {
    if q.norm() < 0.5 {
        let mut term = q * q / 2.0;
        let mut sum = term;
        for n in 3..40 {
            term *= q / n as f64;
            sum += term;
            if term.norm() < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        q.exp() - q - 1.0
    }
}

/// Roots `Q_k = ξ − 1 − W_k(−e^{ξ−1})` of `ξ + e^Q − Q − 1` for
/// `|k| ≤ kmax`; `k = 0, −1` is the pair born at `Q = 0` when `ξ → 0`.
pub fn q_roots(xi: Complex64, kmax: i32) -> Result<Vec<Complex64>, RealMajorError> {
    if xi.re > 30.0 {
        // e^{ξ−1} overflows; iterate Q = log(Q + 1 − ξ) + 2πik instead
        return (-kmax..=kmax)
            .map(|k| {
                let shift = Complex64::new(0.0, 2.0 * PI * k as f64);
                let mut q = (1.0 - xi).ln() + shift;
                for _ in 0..60 {
                    q = (q + 1.0 - xi).ln() + shift;
                }
                newton_root(q, xi).ok_or(RealMajorError::Tracking(xi))
            })
            .collect();
    }
    let x = -(xi - 1.0).exp();
    (-kmax..=kmax)
        .map(|k| Ok(xi - 1.0 - lambert_w(x, k, DEFAULT_TOL)?.w))
        .collect()
}

fn segment_distance(a: Complex64, b: Complex64, p: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0)
    };
    (a + d * t - p).norm()
}

fn nearest(p: Complex64, roots: &[Complex64]) -> f64 {
    roots
        .iter()
        .map(|r| (p - r).norm())
        .fold(f64::INFINITY, f64::min)
}

impl QPath {
    /// The real axis from `−tail_left` to `tail_right`.
    pub fn real(tail_left: f64, tail_right: f64) -> Self {
        let n_left = tail_left.ceil() as usize;
        let n_right = tail_right.ceil() as usize;
        let mut nodes: Vec<Complex64> = (0..n_left)
            .map(|j| Complex64::new(-tail_left + j as f64 * tail_left / n_left as f64, 0.0))
            .collect();
        nodes.extend(
            (0..=n_right).map(|j| Complex64::new(j as f64 * tail_right / n_right as f64, 0.0)),
        );
        QPath {
            nodes,
            tail_left,
            tail_right,
        }
    }

    pub fn clearance(&self, roots: &[Complex64]) -> f64 {
        self.nodes
            .windows(2)
            .flat_map(|w| roots.iter().map(move |&r| segment_distance(w[0], w[1], r)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Split segments longer than `factor` times their distance to the
    /// nearest root (and longer than `MAX_SEGMENT`).
    fn refine(&mut self, roots: &[Complex64], factor: f64) {
        let mut out = Vec::with_capacity(self.nodes.len());
        for w in self.nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            out.push(a);
            let d = nearest(a, roots).min(nearest(b, roots));
            let len = (b - a).norm();
            let n = (len / (factor * d).min(MAX_SEGMENT)).ceil().max(1.0) as usize;
            for j in 1..n {
                out.push(a + (b - a) * (j as f64 / n as f64));
            }
        }
        out.push(*self.nodes.last().expect("nonempty path"));
        self.nodes = out;
    }

    /// Drag the path along with roots moving from `old` to `new`: a smooth
    /// bump displacement around each root, rigid within half its radius, so
    /// the path is isotoped and never crosses a root.
    fn push(&mut self, old: &[Complex64], new: &[Complex64], radii: &[f64]) {
        let last = self.nodes.len() - 1;
        for ((&o, &n), &r_out) in old.iter().zip(new).zip(radii) {
            let delta = n - o;
            if delta == Complex64::new(0.0, 0.0) {
                continue;
            }
            let r_in = 0.5 * r_out;
            for p in &mut self.nodes[1..last] {
                let d = (*p - o).norm();
                let phi = if d <= r_in {
                    1.0
                } else if d >= r_out {
                    0.0
                } else {
                    let s = (r_out - d) / (r_out - r_in);
                    s * s * (3.0 - 2.0 * s)
                };
                *p += delta * phi;
            }
        }
    }
}

fn push_radii(roots: &[Complex64]) -> Vec<f64> {
    roots
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let d = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &s)| (r - s).norm())
                .fold(f64::INFINITY, f64::min);
            (0.45 * d).min(MAX_PUSH_RADIUS)
        })
        .collect()
}

fn sigma(c: CIndex) -> Complex64 {
    c.c - 1.5
}

/// Truncation points `(T_left, T_right)` for `ξ` with `|ξ| ≤ xi_max`.
fn tails(
    kernel: Kernel,
    c: CIndex,
    xi_max: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64), RealMajorError> {
    // right: |ξ+P| ≥ e^Q/4 once e^Q ≥ 4|ξ| and Q ≥ 2
    let s = sigma(c).re + if kernel == Kernel::Nu { 0.5 } else { 0.0 };
    let k = (PI * c.c.im.abs()).exp() * 4f64.powf(-s) / -s;
    let t_right = ((0.5 * spec.abs_tol / k).ln() / s)
        .max(2.0)
        .max((4.0 * xi_max).ln() + 1.0);
    if !(t_right < 600.0) {
        return Err(RealMajorError::TailUnattainable(t_right));
    }
    let t_left = match kernel {
        Kernel::Lambda => 40.0 + 2.0 * xi_max,
        Kernel::Nu => 80.0 + 2.0 * xi_max,
    };
    Ok((t_left, t_right))
}

fn right_tail_bound(kernel: Kernel, c: CIndex, t: f64) -> f64 {
    let s = sigma(c).re + if kernel == Kernel::Nu { 0.5 } else { 0.0 };
    (PI * c.c.im.abs()).exp() * 4f64.powf(-s) * (s * t).exp() / -s
}

fn nearest_log(w: Complex64, reference: Complex64) -> Complex64 {
    let l = w.ln();
    let k = ((reference.im - l.im) / (2.0 * PI)).round();
    l + Complex64::new(0.0, 2.0 * PI * k)
}

/// `∫ kernel dQ` over `path` (plus tails), with `log(ξ+P)` continued from
/// its principal value at the right end.
fn integrate_on_path(
    kernel: Kernel,
    c: CIndex,
    xi: Complex64,
    path: &QPath,
    roots: &[Complex64],
    spec: &QuadratureSpec,
) -> Result<RealMajorValue, RealMajorError> {
    let mut pieces = path.clone();
    pieces.refine(roots, 0.5);
    let nodes = &pieces.nodes;
    // continuous log at every node, right to left
    let mut logs = vec![Complex64::new(0.0, 0.0); nodes.len()];
    let last = nodes.len() - 1;
    logs[last] = (xi + p_of(nodes[last])).ln();
    for j in (0..last).rev() {
        logs[j] = nearest_log(xi + p_of(nodes[j]), logs[j + 1]);
        if (logs[j].im - logs[j + 1].im).abs() > PI / 2.0 {
            return Err(RealMajorError::Branch(format!(
                "argument jumps between Q = {} and {}",
                nodes[j],
                nodes[j + 1]
            )));
        }
    }
    let sig = sigma(c);
    let breaks: Vec<f64> = (0..=last).map(|j| j as f64).collect();
    let q = integrate_try(
        |s| {
            let j = (s.floor() as usize).min(last - 1);
            let (a, b) = (nodes[j], nodes[j + 1]);
            let qv = a + (b - a) * (s - j as f64);
            let l = nearest_log(xi + p_of(qv), logs[j]);
            let mut v = (sig * l).exp() * (b - a);
            if kernel == Kernel::Nu {
                v *= (qv / 2.0).exp();
            }
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite integrand at Q = {qv}"))
            }
        },
        &breaks,
        spec,
    )?;
    let mut value = q.value;
    let mut est = q.est_error + right_tail_bound(kernel, c, path.tail_right);
    let t = path.tail_left;
    match kernel {
        Kernel::Lambda => {
            // ∫_{−∞}^{−T} (ξ − 1 − Q)^σ dQ, dropping e^Q
            let l = nearest_log(xi - 1.0 + t, logs[0]);
            let tail = -((sig + 1.0) * l).exp() / (sig + 1.0);
            value += tail;
            est += tail.norm() * (-t).exp();
        }
        Kernel::Nu => {
            est += 2.0
                * (PI * c.c.im.abs()).exp()
                * (t - xi.norm() - 1.0).powf(sig.re)
                * (-t / 2.0).exp();
        }
    }
    let prefactor = gamma_ref(1.5 - c.c)?.value / (2.0 * PI).sqrt();
    Ok(RealMajorValue {
        value: value * prefactor,
        est_error: est * prefactor.norm(),
        panels: q.panels,
        qpath_nodes: path.nodes.len(),
    })
}

fn principal(
    kernel: Kernel,
    c: CIndex,
    xi: Complex64,
    spec: &QuadratureSpec,
) -> Result<RealMajorValue, RealMajorError> {
    if !xi.is_finite() || (xi.im == 0.0 && xi.re <= 0.0) {
        return Err(RealMajorError::InvalidXi(xi));
    }
    let (tl, tr) = tails(kernel, c, xi.norm(), spec)?;
    let path = QPath::real(tl, tr);
    let roots = q_roots(xi, TRACKED)?;
    integrate_on_path(kernel, c, xi, &path, &roots, spec)
}

/// Principal branch of the real-major of `λ_c`, `Re c < 1/2`, `ξ ∉ (−∞, 0]`.
pub fn rho_lambda_c(
    c: CIndex,
    xi: Complex64,
    spec: &QuadratureSpec,
) -> Result<RealMajorValue, RealMajorError> {
    c.check(0.5)?;
    principal(Kernel::Lambda, c, xi, spec)
}

/// Principal branch of the real-major of `ν_c`, `Re c < 1`.
pub fn rho_nu_c(
    c: CIndex,
    xi: Complex64,
    spec: &QuadratureSpec,
) -> Result<RealMajorValue, RealMajorError> {
    c.check(1.0)?;
    principal(Kernel::Nu, c, xi, spec)
}

fn check_xi_path(path_xi: &[Complex64]) -> Result<(), RealMajorError> {
    if path_xi.is_empty() {
        return Err(RealMajorError::Branch("empty ξ path".into()));
    }
    let start = path_xi[0];
    if !start.is_finite() || (start.im == 0.0 && start.re <= 0.0) {
        return Err(RealMajorError::InvalidXi(start));
    }
    for w in path_xi.windows(2).chain(std::iter::once(&path_xi[..1])) {
        let (a, b) = (w[0], *w.last().expect("nonempty"));
        let lo = a.im.min(b.im) / (2.0 * PI) - 1.0;
        let hi = a.im.max(b.im) / (2.0 * PI) + 1.0;
        for m in lo.floor() as i64..=hi.ceil() as i64 {
            let omega = Complex64::new(0.0, 2.0 * PI * m as f64);
            let d = segment_distance(a, b, omega);
            if d < XI_CLEARANCE {
                return Err(RealMajorError::Collision { omega, distance: d });
            }
        }
    }
    Ok(())
}

fn newton_root(mut q: Complex64, xi: Complex64) -> Option<Complex64> {
    for _ in 0..30 {
        let step = (xi + p_of(q)) / q.exp_m1();
        q -= step;
        if !q.is_finite() {
            return None;
        }
        if step.norm() <= 1e-14 * q.norm().max(1.0) {
            return Some(q);
        }
    }
    None
}

trait ExpM1 {
    fn exp_m1(self) -> Self;
}

impl ExpM1 for Complex64 {
    fn exp_m1(self) -> Complex64 {
        if self.norm() < 0.5 {
            p_of(self) + self
        } else {
            self.exp() - 1.0
        }
    }
}

/// Deform the real `Q` path along `path_xi`, dragging it with the tracked
/// roots. Returns the final path and roots.
pub fn continue_qpath(
    path_xi: &[Complex64],
    tails: (f64, f64),
) -> Result<(QPath, Vec<Complex64>), RealMajorError> {
    check_xi_path(path_xi)?;
    let mut xi = path_xi[0];
    let mut roots = q_roots(xi, TRACKED)?;
    let mut path = QPath::real(tails.0, tails.1);
    for &target in &path_xi[1..] {
        while xi != target {
            let radii = push_radii(&roots);
            path.refine(&roots, 0.25);
            // speed of each root: dQ/dξ = −1/(Q − ξ)
            let speed = roots
                .iter()
                .zip(&radii)
                .map(|(r, rad)| 1.0 / ((r - xi).norm() * 0.1 * rad))
                .fold(0.0, f64::max);
            let mut h = (1.0 / speed).min(0.05).min((target - xi).norm());
            loop {
                let next = if h >= (target - xi).norm() {
                    target
                } else {
                    xi + (target - xi) * (h / (target - xi).norm())
                };
                let d = next - xi;
                let moved: Option<Vec<Complex64>> = roots
                    .iter()
                    .map(|&r| newton_root(r - d / (r - xi), next))
                    .collect();
                let ok = moved.as_ref().is_some_and(|m| {
                    m.iter()
                        .zip(&roots)
                        .zip(&radii)
                        .all(|((n, o), rad)| (n - o).norm() <= 0.2 * rad)
                });
                if ok {
                    let m = moved.expect("checked");
                    path.push(&roots, &m, &radii);
                    roots = m;
                    xi = next;
                    break;
                }
                h *= 0.5;
                if h < 1e-10 {
                    return Err(RealMajorError::Tracking(xi));
                }
            }
            if path.clearance(&roots) < Q_CLEARANCE {
                return Err(RealMajorError::Tracking(xi));
            }
        }
    }
    // untracked roots must stay well away from the deformed path
    let far: Vec<Complex64> = q_roots(xi, 2 * TRACKED)?
        .into_iter()
        .filter(|r| nearest(*r, &roots) > 1e-6)
        .collect();
    if path.clearance(&far) < 1.0 {
        return Err(RealMajorError::Tracking(xi));
    }
    Ok((path, roots))
}

/// Analytic continuation of the real-major of `λ_c` along the polyline
/// `path_xi`, which starts off `(−∞, 0]` and avoids `2πiℤ`.
pub fn rho_continue(
    c: CIndex,
    path_xi: &[Complex64],
    spec: &QuadratureSpec,
) -> Result<RealMajorValue, RealMajorError> {
    c.check(0.5)?;
    let xi_max = path_xi.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let t = tails(Kernel::Lambda, c, xi_max, spec)?;
    let (path, roots) = continue_qpath(path_xi, t)?;
    let xi = *path_xi.last().expect("checked nonempty");
    integrate_on_path(Kernel::Lambda, c, xi, &path, &roots, spec)
}

/// Polyline for the arc `|ξ| = r` from `arg = from` to `arg = to`.
pub fn arc_path(r: f64, from: f64, to: f64) -> Vec<Complex64> {
    let n = ((to - from).abs() / 0.05).ceil().max(1.0) as usize;
    (0..=n)
        .map(|j| Complex64::from_polar(r, from + (to - from) * j as f64 / n as f64))
        .collect()
}

/// Polyline from `ξ = 1` along `|ξ| = 1` to `arg ξ = sheet`, out along that
/// ray to the circle of radius `r` around the point `2π|m|e^{i·sheet}`, once
/// around it counterclockwise, and back the same way.
pub fn winding_path(m: u32, sheet: f64, r: f64) -> Vec<Complex64> {
    let mut out = arc_path(1.0, 0.0, sheet);
    let dir = Complex64::from_polar(1.0, sheet);
    let omega = dir * (2.0 * PI * m as f64);
    let entry = omega - dir * r;
    out.push(entry);
    let n = 128;
    out.extend(
        (1..=n).map(|j| omega - dir * Complex64::from_polar(r, 2.0 * PI * j as f64 / n as f64)),
    );
    let back: Vec<Complex64> = out[..out.len() - n - 1].iter().rev().copied().collect();
    out.extend(back);
    out
}

/// `λ̂₁(ξ) = (1/(2πi√2)) ∮ (e^Q − Q − 1 − ξ)^{−1/2} e^Q dQ` on a circle
/// enclosing the two roots `Q±(ξ)` and no other. The square root starts
/// principal at the rightmost point of the circle and is carried
/// continuously round it; the result is computed by the periodic trapezoid
/// rule with doubling.
pub fn minor_lambda1_contour(
    xi: Complex64,
    spec: &QuadratureSpec,
) -> Result<RealMajorValue, RealMajorError> {
    if !(xi.norm() < 2.0 * PI - XI_CLEARANCE) {
        return Err(RealMajorError::InvalidXi(xi));
    }
    // roots of e^Q − Q − 1 = ξ are the roots of (−ξ) + P
    let mut norms: Vec<f64> = q_roots(-xi, 3)?.iter().map(|r| r.norm()).collect();
    norms.sort_by(f64::total_cmp);
    let (inner, outer) = (norms[1], norms[2]);
    if !(inner < outer) {
        return Err(RealMajorError::Branch(format!(
            "cannot separate Q± from the other roots at ξ = {xi}"
        )));
    }
    let radius = if inner < 1.0 && outer > 2.0 {
        1.5
    } else {
        0.5 * (inner + outer)
    };
    let sum_for = |n: usize| -> Result<Complex64, RealMajorError> {
        let q0 = Complex64::new(radius, 0.0);
        let s0 = (p_of(q0) - xi).sqrt();
        let mut s = s0;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            let q = Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64);
            let cand = (p_of(q) - xi).sqrt();
            let next = if (cand - s).norm() <= (cand + s).norm() {
                cand
            } else {
                -cand
            };
            if (next - s).norm() > 0.5 * s.norm() {
                return Err(RealMajorError::Branch(
                    "square root varies too fast on the contour".into(),
                ));
            }
            s = next;
            if j < n {
                acc += q.exp() / s * Complex64::i() * q;
            }
        }
        if (s - s0).norm() > 1e-8 * s0.norm() {
            return Err(RealMajorError::Branch(
                "square root does not close around the contour".into(),
            ));
        }
        Ok(acc * (2.0 * PI / n as f64) / (2.0 * PI * Complex64::i() * 2f64.sqrt()))
    };
    let mut n = 64;
    let mut prev = sum_for(n)?;
    loop {
        n *= 2;
        let cur = sum_for(n)?;
        let diff = (cur - prev).norm();
        if diff <= spec.rel_tol * cur.norm() || diff <= spec.abs_tol {
            return Ok(RealMajorValue {
                value: cur,
                est_error: diff,
                panels: n,
                qpath_nodes: n,
            });
        }
        if n >= 1 << 16 {
            return Err(QuadError::NoConvergence {
                value: cur,
                est_error: diff,
                panels: n,
            }
            .into());
        }
        prev = cur;
    }
}

/// Taylor coefficients at `ξ = 0` of `λ̂₁` from Cauchy integrals on
/// `|ξ| = radius`.
pub fn lambda1_taylor(
    radius: f64,
    nmax: usize,
    spec: &QuadratureSpec,
) -> Result<Vec<Complex64>, RealMajorError> {
    let m = 64;
    let samples: Vec<Complex64> = (0..m)
        .map(|j| {
            minor_lambda1_contour(
                Complex64::from_polar(radius, 2.0 * PI * j as f64 / m as f64),
                spec,
            )
            .map(|v| v.value)
        })
        .collect::<Result<_, _>>()?;
    Ok((0..=nmax)
        .map(|n| {
            let s: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, f)| f * Complex64::from_polar(1.0, -2.0 * PI * (n * j) as f64 / m as f64))
                .sum();
            s / m as f64 / radius.powi(n as i32)
        })
        .collect())
}
