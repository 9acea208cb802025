//! Paths on the Borel surface and transport of Lambert-W branch labels.
//!
//! With `x = −e^{−1−η}`, the point `x` crosses the negative real axis exactly
//! when `η` crosses a line `Im η = 2πn`. Crossing upward moves `x` from below
//! the cut to above it, and each W branch continues into another one:
//!
//! | `Re η` at the crossing     | upward map                                |
//! |----------------------------|-------------------------------------------|
//! | `> 0` (x in (−1/e, 0))     | `0 → 0`, `1 → −1`, `k → k−1` otherwise    |
//! | `< 0` (x < −1/e)           | `k → k−1` for every `k`                   |
//!
//! Downward crossings apply the inverse map. Crossing at `Re η = 0` means
//! passing through a singular point and is refused. A point lying exactly on
//! a line counts as being above it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::BorelError;
use crate::lambertw::BranchIndex;

const TWO_PI: f64 = 2.0 * PI;

/// Radius of the forbidden disks around `2πim`, `m ≠ 0`.
pub const PROXIMITY: f64 = 2.0 * PI * 1e-6;

/// Radius of the small circle around the origin on which paths leave the
/// base point.
pub const START_RADIUS: f64 = 1e-3;

/// Labels `(a, b)` of the two W branches carried along a path; at the base
/// point just above `η = 0⁺` they are `(−1, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BranchState {
    pub plus: BranchIndex,
    pub minus: BranchIndex,
}

impl Default for BranchState {
    fn default() -> Self {
        BranchState {
            plus: BranchIndex(-1),
            minus: BranchIndex(0),
        }
    }
}

impl BranchState {
    fn map(self, f: impl Fn(i32) -> i32) -> Self {
        BranchState {
            plus: BranchIndex(f(self.plus.0)),
            minus: BranchIndex(f(self.minus.0)),
        }
    }
}

pub fn cross_up(k: i32, re_positive: bool) -> i32 {
    if !re_positive {
        return k - 1;
    }
    match k {
        0 => 0,
        1 => -1,
        k => k - 1,
    }
}

pub fn cross_down(k: i32, re_positive: bool) -> i32 {
    if !re_positive {
        return k + 1;
    }
    match k {
        0 => 0,
        -1 => 1,
        k => k + 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// A path from the origin along the ray `base_theta`, passing the singular
/// points `2πim` on that ray to the given side, in order of increasing `|m|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchPath {
    pub base_theta: f64,
    pub detours: Vec<(i64, Side)>,
}

impl BranchPath {
    pub fn straight(base_theta: f64) -> Self {
        BranchPath {
            base_theta,
            detours: Vec::new(),
        }
    }

    pub fn new(base_theta: f64, detours: Vec<(i64, Side)>) -> Result<Self, BorelError> {
        let bp = BranchPath {
            base_theta,
            detours,
        };
        bp.validate()?;
        Ok(bp)
    }

    fn direction(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.base_theta)
    }

    pub fn validate(&self) -> Result<(), BorelError> {
        let d = self.direction();
        let mut last = 0i64;
        for &(m, _) in &self.detours {
            if m == 0 {
                return Err(BorelError::BadPath("detour around the origin".into()));
            }
            let omega = Complex64::new(0.0, TWO_PI * m as f64);
            if (omega / omega.norm() - d).norm() > 1e-9 {
                return Err(BorelError::BadPath(format!(
                    "2πi·{m} is not on the ray of direction {}",
                    self.base_theta
                )));
            }
            if m.abs() <= last {
                return Err(BorelError::BadPath(
                    "detours must be ordered by increasing modulus".into(),
                ));
            }
            last = m.abs();
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Piece {
    Line {
        to: Complex64,
    },
    /// Arc around `center` by `sweep` radians (positive = counter-clockwise).
    Arc {
        center: Complex64,
        sweep: f64,
    },
}

/// A piecewise path in the variable of a Borel function. It leaves the base
/// point on the small circle `|ξ| = START_RADIUS`, turning from the anchor
/// direction to `initial_theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePath {
    pub initial_theta: f64,
    pub pieces: Vec<Piece>,
    current: Complex64,
}

impl SurfacePath {
    pub fn leaving_origin(theta: f64) -> Self {
        SurfacePath {
            initial_theta: theta,
            pieces: Vec::new(),
            current: Complex64::from_polar(START_RADIUS, theta),
        }
    }

    /// Default path to a surface point: turn at small radius, then go out
    /// radially.
    pub fn to_point(xi: crate::SurfacePoint) -> Self {
        let mut p = SurfacePath::leaving_origin(xi.theta);
        p.line_to(xi.to_complex());
        p
    }

    pub fn current(&self) -> Complex64 {
        self.current
    }

    pub fn line_to(&mut self, to: Complex64) -> &mut Self {
        self.pieces.push(Piece::Line { to });
        self.current = to;
        self
    }

    pub fn arc_around(&mut self, center: Complex64, sweep: f64) -> &mut Self {
        let rel = self.current - center;
        self.pieces.push(Piece::Arc { center, sweep });
        self.current = center + Complex64::from_polar(rel.norm(), rel.arg() + sweep);
        self
    }

    /// Follow a branch path along its ray, passing each listed singular point
    /// on a half circle of radius `detour_radius`.
    pub fn along_branch_path(bp: &BranchPath, detour_radius: f64) -> Result<Self, BorelError> {
        bp.validate()?;
        let d = bp.direction();
        let mut p = SurfacePath::leaving_origin(bp.base_theta);
        for &(m, side) in &bp.detours {
            let omega = Complex64::new(0.0, TWO_PI * m as f64);
            p.line_to(omega - d * detour_radius);
            let sweep = match side {
                Side::Right => PI,
                Side::Left => -PI,
            };
            p.arc_around(omega, sweep);
        }
        Ok(p)
    }

    /// The same path seen in the variable `e^{iα}·ξ`.
    pub fn rotated(&self, alpha: f64) -> SurfacePath {
        let r = Complex64::from_polar(1.0, alpha);
        SurfacePath {
            initial_theta: self.initial_theta + alpha,
            pieces: self
                .pieces
                .iter()
                .map(|p| match *p {
                    Piece::Line { to } => Piece::Line { to: to * r },
                    Piece::Arc { center, sweep } => Piece::Arc {
                        center: center * r,
                        sweep,
                    },
                })
                .collect(),
            current: self.current * r,
        }
    }

    /// Break the path into pieces along which `Im` is monotone, as a
    /// sequence of shared nodes. The first node is `START_RADIUS·e^{i·anchor}`.
    pub(crate) fn walk(&self, anchor: f64) -> Walk {
        let mut w = Walk {
            nodes: vec![Complex64::from_polar(START_RADIUS, anchor)],
            elems: Vec::new(),
        };
        if self.initial_theta != anchor {
            w.push_arc(
                Complex64::new(0.0, 0.0),
                START_RADIUS,
                anchor,
                self.initial_theta,
            );
        }
        for piece in &self.pieces {
            let here = *w.nodes.last().unwrap();
            match *piece {
                Piece::Line { to } => {
                    if to != here {
                        w.nodes.push(to);
                        w.elems.push(Elem::Line);
                    }
                }
                Piece::Arc { center, sweep } => {
                    let rel = here - center;
                    let a0 = rel.arg();
                    w.push_arc(center, rel.norm(), a0, a0 + sweep);
                }
            }
        }
        w
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Elem {
    Line,
    /// Monotone arc from angle `from` by `sweep`; `cos_sign` is the sign of
    /// `cos φ` along it.
    Arc {
        center: Complex64,
        radius: f64,
        from: f64,
        sweep: f64,
        cos_sign: f64,
    },
}

#[derive(Debug, Clone)]
pub(crate) struct Walk {
    pub nodes: Vec<Complex64>,
    pub elems: Vec<Elem>,
}

impl Walk {
    fn push_arc(&mut self, center: Complex64, radius: f64, from: f64, to: f64) {
        if from == to {
            return;
        }
        // split at the extremal angles π/2 + jπ
        let dir = (to - from).signum();
        let mut a = from;
        loop {
            let next_turn = if dir > 0.0 {
                ((a - PI / 2.0) / PI).floor() * PI + PI / 2.0 + PI
            } else {
                ((a - PI / 2.0) / PI).ceil() * PI + PI / 2.0 - PI
            };
            let b = if (dir > 0.0 && next_turn < to) || (dir < 0.0 && next_turn > to) {
                next_turn
            } else {
                to
            };
            let mid = 0.5 * (a + b);
            self.nodes.push(center + Complex64::from_polar(radius, b));
            self.elems.push(Elem::Arc {
                center,
                radius,
                from: a,
                sweep: b - a,
                cos_sign: mid.cos().signum(),
            });
            if b == to {
                break;
            }
            a = b;
        }
    }

    pub fn end(&self) -> Complex64 {
        *self.nodes.last().unwrap()
    }

    pub fn transport(&self, start: BranchState) -> Result<BranchState, BorelError> {
        self.check_clearance()?;
        let mut st = start;
        for (i, elem) in self.elems.iter().enumerate() {
            let (p, q) = (self.nodes[i], self.nodes[i + 1]);
            let (b0, b1) = (band(p.im), band(q.im));
            if b0 == b1 {
                continue;
            }
            let lines: Vec<(i64, bool)> = if b1 > b0 {
                (b0 + 1..=b1).map(|n| (n, true)).collect()
            } else {
                (b1 + 1..=b0).rev().map(|n| (n, false)).collect()
            };
            for (n, up) in lines {
                let y = TWO_PI * n as f64;
                let re = match *elem {
                    Elem::Line => p.re + (q.re - p.re) * (y - p.im) / (q.im - p.im),
                    Elem::Arc {
                        center,
                        radius,
                        cos_sign,
                        ..
                    } => {
                        let v = (y - center.im) / radius;
                        center.re + cos_sign * radius * (1.0 - v * v).max(0.0).sqrt()
                    }
                };
                if re == 0.0 || (n != 0 && re.abs() < PROXIMITY) {
                    return Err(BorelError::Proximity {
                        omega: Complex64::new(0.0, y),
                        distance: re.abs(),
                    });
                }
                let pos = re > 0.0;
                st = if up {
                    st.map(|k| cross_up(k, pos))
                } else {
                    st.map(|k| cross_down(k, pos))
                };
            }
        }
        Ok(st)
    }

    fn check_clearance(&self) -> Result<(), BorelError> {
        for (i, elem) in self.elems.iter().enumerate() {
            let (p, q) = (self.nodes[i], self.nodes[i + 1]);
            let (lo, hi) = match *elem {
                Elem::Line => (p.im.min(q.im), p.im.max(q.im)),
                Elem::Arc { center, radius, .. } => (center.im - radius, center.im + radius),
            };
            let m0 = ((lo - PROXIMITY) / TWO_PI).ceil() as i64;
            let m1 = ((hi + PROXIMITY) / TWO_PI).floor() as i64;
            for m in m0..=m1 {
                if m == 0 {
                    continue;
                }
                let omega = Complex64::new(0.0, TWO_PI * m as f64);
                let dist = match *elem {
                    Elem::Line => segment_distance(omega, p, q),
                    Elem::Arc { center, radius, .. } => ((omega - center).norm() - radius).abs(),
                };
                if dist < PROXIMITY {
                    return Err(BorelError::Proximity {
                        omega,
                        distance: dist,
                    });
                }
            }
        }
        Ok(())
    }
}

fn band(y: f64) -> i64 {
    (y / TWO_PI).floor() as i64
}

fn segment_distance(z: Complex64, p: Complex64, q: Complex64) -> f64 {
    let d = q - p;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (z - p).norm();
    }
    let t = (((z - p) * d.conj()).re / len2).clamp(0.0, 1.0);
    (z - (p + d * t)).norm()
}

/// Distance from `η` to the nearest `2πim`, `m ≠ 0`.
pub fn distance_to_singular(eta: Complex64) -> (Complex64, f64) {
    let m = (eta.im / TWO_PI).round();
    let m = if m != 0.0 {
        m
    } else if eta.im >= 0.0 {
        1.0
    } else {
        -1.0
    };
    [m - 1.0, m, m + 1.0]
        .into_iter()
        .filter(|&k| k != 0.0)
        .map(|k| {
            let w = Complex64::new(0.0, TWO_PI * k);
            (w, (eta - w).norm())
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

/// Reduced coordinates of `η` for evaluating `x = −e^{−1−η}`: returns
/// `(n, t)` with `t = Im η − 2πn` small and its sign matching the side of
/// the line `Im η = 2πn` used by the transport (on the line counts as above).
pub(crate) fn reduce(eta: Complex64) -> (i64, f64) {
    let n = (eta.im / TWO_PI).round();
    let mut t = eta.im - TWO_PI * n;
    let above = band(eta.im) >= n as i64;
    if above && t < 0.0 {
        t = 0.0;
    } else if !above && t >= 0.0 {
        t = -0.0;
    }
    (n as i64, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transport_maps_are_inverse() {
        for k in -5..=5 {
            for pos in [true, false] {
                assert_eq!(cross_down(cross_up(k, pos), pos), k);
                assert_eq!(cross_up(cross_down(k, pos), pos), k);
            }
        }
    }

    #[test]
    fn full_turn_around_origin_swaps_labels() {
        let mut p = SurfacePath::leaving_origin(0.0);
        p.initial_theta = 2.0 * PI + 0.1;
        let st = p.walk(0.0).transport(BranchState::default()).unwrap();
        assert_eq!(
            st,
            BranchState {
                plus: BranchIndex(0),
                minus: BranchIndex(-1)
            }
        );
        p.initial_theta = 4.0 * PI + 0.1;
        let st = p.walk(0.0).transport(BranchState::default()).unwrap();
        assert_eq!(st, BranchState::default());
        p.initial_theta = -2.0 * PI + 0.1;
        let st = p.walk(0.0).transport(BranchState::default()).unwrap();
        assert_eq!(
            st,
            BranchState {
                plus: BranchIndex(0),
                minus: BranchIndex(-1)
            }
        );
    }

    #[test]
    fn closed_loop_around_singular_point_is_trivial_when_retraced() {
        let omega = Complex64::new(0.0, TWO_PI);
        let mut p = SurfacePath::leaving_origin(PI / 2.0);
        p.line_to(omega - Complex64::new(0.0, 0.5));
        p.arc_around(omega, PI).arc_around(omega, -PI);
        p.line_to(Complex64::new(0.0, 1.0));
        let st = p.walk(0.0).transport(BranchState::default()).unwrap();
        assert_eq!(st, BranchState::default());
    }

    #[test]
    fn singular_ray_is_refused() {
        let mut p = SurfacePath::leaving_origin(PI / 2.0);
        p.line_to(Complex64::new(0.0, 8.0));
        assert!(matches!(
            p.walk(0.0).transport(BranchState::default()),
            Err(BorelError::Proximity { .. })
        ));
    }

    #[test]
    fn branch_paths_are_validated() {
        assert!(BranchPath::new(PI / 2.0, vec![(1, Side::Right), (2, Side::Left)]).is_ok());
        assert!(BranchPath::new(PI / 2.0, vec![(-1, Side::Right)]).is_err());
        assert!(BranchPath::new(PI / 2.0, vec![(2, Side::Right), (1, Side::Left)]).is_err());
        assert!(BranchPath::new(0.0, vec![(1, Side::Right)]).is_err());
    }
}
