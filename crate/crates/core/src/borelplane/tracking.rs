//! Continuation by following the two roots `q±` of `q − log q − 1 = η`
//! (equivalently `q = e^{q−1−η}`) with predictor–corrector steps.
//!
//! This does not use branch labels or Lambert W at all, and is used to
//! cross-check the label transport.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::path::{Elem, SurfacePath, START_RADIUS};
use super::{BorelError, BorelFunction, BorelKind};
use crate::exactseries::{puiseux_q, RootSign};
use crate::surface::SurfacePoint;

fn corrector(mut q: Complex64, eta: Complex64) -> Option<Complex64> {
    for _ in 0..30 {
        let e = (q - 1.0 - eta).exp();
        let step = (q - e) / (1.0 - e);
        q -= step;
        if !q.is_finite() {
            return None;
        }
        if step.norm() <= 1e-15 * q.norm() {
            return Some(q);
        }
    }
    // rounding floor near the double root q = 1
    let e = (q - 1.0 - eta).exp();
    ((q - e).norm() <= 1e-14 * q.norm()).then_some(q)
}

fn step_bound(eta: Complex64) -> f64 {
    let m = (eta.im / (2.0 * PI)).round();
    let d = (eta - Complex64::new(0.0, 2.0 * PI * m)).norm();
    (0.02 * d).clamp(1e-7, 0.05)
}

fn point(elem: &Elem, p: Complex64, q: Complex64, t: f64) -> Complex64 {
    match *elem {
        Elem::Line => p + (q - p) * t,
        Elem::Arc {
            center,
            radius,
            from,
            sweep,
            ..
        } => center + Complex64::from_polar(radius, from + sweep * t),
    }
}

/// Roots `(q+, q−)` at the end of `path`, written in the η variable with the
/// base ray `arg η = 0`, where `q+ > 1 > q−` on the positive axis.
pub fn track_roots(path: &SurfacePath) -> Result<(Complex64, Complex64), BorelError> {
    let walk = path.walk(0.0);
    let start = SurfacePoint::new(START_RADIUS, 0.0);
    let mut qp = puiseux_q(RootSign::Plus, 14).eval(start);
    let mut qm = puiseux_q(RootSign::Minus, 14).eval(start);
    for (i, elem) in walk.elems.iter().enumerate() {
        let (p, q) = (walk.nodes[i], walk.nodes[i + 1]);
        let speed = match *elem {
            Elem::Line => (q - p).norm(),
            Elem::Arc { radius, sweep, .. } => radius * sweep.abs(),
        };
        let mut t = 0.0;
        let mut eta = p;
        while t < 1.0 {
            let mut h = (step_bound(eta) / speed).min(1.0 - t);
            loop {
                let t1 = if t + h >= 1.0 { 1.0 } else { t + h };
                let eta1 = if t1 == 1.0 { q } else { point(elem, p, q, t1) };
                let d = eta1 - eta;
                let pred = |r: Complex64| r + d * r / (r - 1.0);
                let sep = (qp - qm).norm();
                let next = corrector(pred(qp), eta1).zip(corrector(pred(qm), eta1));
                match next {
                    Some((a, b))
                        if (a - qp).norm() < 0.25 * sep && (b - qm).norm() < 0.25 * sep =>
                    {
                        qp = a;
                        qm = b;
                        t = t1;
                        eta = eta1;
                        break;
                    }
                    _ => {
                        h *= 0.5;
                        if h * speed < 1e-12 {
                            return Err(BorelError::Tracking(eta));
                        }
                    }
                }
            }
        }
    }
    Ok((qp, qm))
}

impl BorelFunction {
    /// Same as [`BorelFunction::eval_path`] but continued by root tracking.
    pub fn eval_tracked(&self, path: &SurfacePath) -> Result<Complex64, BorelError> {
        if self.kind == BorelKind::MinorMu {
            return super::minor_mu(path.current());
        }
        if self.branch_state != super::BranchState::default() {
            return Err(BorelError::BadPath(
                "root tracking starts from the default labels only".into(),
            ));
        }
        let (qp, qm) = track_roots(&path.rotated(-self.kind.anchor()))?;
        Ok(self.combine(-qp, -qm))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::borelplane::{BranchPath, Side, DETOUR_RADIUS};

    fn all_kinds() -> [BorelFunction; 4] {
        [
            BorelKind::MinorLambda32,
            BorelKind::MajorLambda32,
            BorelKind::MinorChi,
            BorelKind::MajorChi,
        ]
        .map(BorelFunction::new)
    }

    #[test]
    fn tracking_agrees_with_labels_on_canonical_paths() {
        for f in all_kinds() {
            for (r, th) in [
                (1.0, 0.0),
                (3.0, 2.0),
                (8.0, -1.0),
                (5.0, 4.5),
                (2.0, -7.0),
                (9.0, 1.4),
                (0.5, 9.0),
            ] {
                let path = SurfacePath::to_point(SurfacePoint::new(r, th));
                let a = f.eval_path(&path).unwrap();
                let b = f.eval_tracked(&path).unwrap();
                assert!(
                    (a - b).norm() <= 1e-10 * a.norm().max(1.0),
                    "{:?} at {r}@{th}: {a} vs {b}",
                    f.kind
                );
            }
        }
    }

    #[test]
    fn tracking_agrees_through_detours() {
        let f = BorelFunction::new(BorelKind::MinorLambda32);
        let cases = [
            (PI / 2.0, vec![(1, Side::Right)], Complex64::new(0.3, 9.0)),
            (
                PI / 2.0,
                vec![(1, Side::Left), (2, Side::Right)],
                Complex64::new(-1.0, 15.0),
            ),
            (
                -PI / 2.0,
                vec![(-1, Side::Right), (-2, Side::Right)],
                Complex64::new(2.0, -14.0),
            ),
            (
                -PI / 2.0,
                vec![(-1, Side::Left)],
                Complex64::new(-3.0, -3.0),
            ),
        ];
        for (theta, detours, target) in cases {
            let bp = BranchPath::new(theta, detours).unwrap();
            let mut p = SurfacePath::along_branch_path(&bp, DETOUR_RADIUS).unwrap();
            p.line_to(target);
            let a = f.eval_path(&p).unwrap();
            let b = f.eval_tracked(&p).unwrap();
            assert!(
                (a - b).norm() <= 1e-10 * a.norm().max(1.0),
                "{bp:?}: {a} vs {b}"
            );
        }
    }
}
