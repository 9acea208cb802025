//! Complex Lambert W on every integer branch.
//!
//! Branch cuts follow Corless–Gonnet–Hare–Jeffrey–Knuth: `W_0` is cut along
//! `(−∞, −1/e]`, every other branch along `(−∞, 0]`, and values on a cut are
//! the limits from above (counter-clockwise continuity). A signed-zero
//! imaginary part is honoured: `x.im == -0.0` selects the limit from below.
//!
//! Test vectors (from the defining relation, checked against the real
//! branches by bisection in the tests):
//!
//! | x            | k  | W_k(x)                     |
//! |--------------|----|----------------------------|
//! | −0.1 + 0i    | 0  | −0.111832559158963         |
//! | −0.1 + 0i    | −1 | −3.577152063957297         |
//! | −0.1 − 0i    | 1  | −3.577152063957297         |
//! | −1/e         | 0  | −1                         |

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-13;
const MAX_ITER: usize = 100;
const BRANCH_SERIES_RADIUS: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchIndex(pub i32);

impl From<i32> for BranchIndex {
    fn from(k: i32) -> Self {
        BranchIndex(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WValue {
    pub w: Complex64,
    pub branch: BranchIndex,
    /// `|w e^w − x|` after the last iteration.
    pub residual: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LambertError {
    #[error("W_{k}(0) is undefined (logarithmic singularity)")]
    ZeroOffPrincipal { k: i32 },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("Lambert W did not converge: last iterate {last}, residual {residual:e}")]
    NoConvergence { last: Complex64, residual: f64 },
    #[error("non-finite argument {0}")]
    NonFinite(Complex64),
    #[error("iteration for W_{k} converged to {w}, which lies on another branch")]
    WrongBranch { k: i32, w: Complex64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sheet {
    /// `W ≈ −1 + p`, the `W_0` side.
    Plus,
    /// `W ≈ −1 − p`, the `W_{−1}` side on the real slice.
    Minus,
}

fn from_above(x: Complex64) -> bool {
    x.im > 0.0 || (x.im == 0.0 && x.im.is_sign_positive())
}

/// `−1 + p − p²/3 + 11p³/72 − …` around the branch point, `p = ±√(2(ex+1))`.
fn branch_point_series(p: Complex64) -> Complex64 {
    const C: [f64; 8] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
        680863.0 / 43545600.0,
    ];
    C.iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * p + c)
}

fn initial_guess(x: Complex64, k: i32) -> Complex64 {
    let d = E * x + 1.0;
    if d.norm() < BRANCH_SERIES_RADIUS {
        let p = (2.0 * d).sqrt();
        match k {
            0 => return branch_point_series(p),
            -1 if from_above(x) => return branch_point_series(-p),
            1 if !from_above(x) => return branch_point_series(-p),
            _ => {}
        }
    }
    if k == 0 {
        if x.norm() < 1.0 {
            // Padé approximant at the origin.
            return x * (3.0 + 6.0 * x + x * x) / (3.0 + 9.0 * x + 5.0 * x * x);
        }
        let l1 = (1.0 + x).ln();
        if x.norm() < 3.0 {
            return l1 * (1.0 - (1.0 + l1).ln() / (2.0 + l1));
        }
    }
    let l1 = x.ln() + Complex64::new(0.0, 2.0 * PI * k as f64);
    let l2 = l1.ln();
    l1 - l2 + l2 / l1
}

fn halley(x: Complex64, mut w: Complex64, tol: f64) -> Result<Complex64, LambertError> {
    let scale = x.norm().max(1.0);
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let w1 = w + 1.0;
        let denom = ew * w1 - (w + 2.0) * f / (2.0 * w1);
        if !denom.is_finite() || denom.norm() == 0.0 {
            break;
        }
        let step = f / denom;
        w -= step;
        if step.norm() <= 4.0 * f64::EPSILON * w.norm().max(1.0) {
            break;
        }
    }
    let residual = (w * w.exp() - x).norm();
    if residual <= tol * scale && w.is_finite() {
        Ok(w)
    } else {
        Err(LambertError::NoConvergence { last: w, residual })
    }
}

/// `W_k(x)` with `|w e^w − x| ≤ tol·max(1, |x|)`.
pub fn lambert_w(
    x: Complex64,
    k: impl Into<BranchIndex>,
    tol: f64,
) -> Result<WValue, LambertError> {
    let k = k.into().0;
    if !(tol > 0.0) {
        return Err(LambertError::BadTolerance(tol));
    }
    if !x.is_finite() {
        return Err(LambertError::NonFinite(x));
    }
    if x == Complex64::new(0.0, 0.0) {
        return if k == 0 {
            Ok(WValue {
                w: x,
                branch: BranchIndex(0),
                residual: 0.0,
            })
        } else {
            Err(LambertError::ZeroOffPrincipal { k })
        };
    }
    let l1 = x.ln() + Complex64::new(0.0, 2.0 * PI * k as f64);
    let seeds = [
        initial_guess(x, k),
        l1 - l1.ln() + l1.ln() / l1,
        l1 - l1.ln(),
    ];
    let mut last = None;
    for seed in seeds {
        match halley(x, seed, tol) {
            Ok(w) if near_branch_point(x, k) || on_branch(w, x, k) => {
                return Ok(WValue {
                    w,
                    branch: BranchIndex(k),
                    residual: (w * w.exp() - x).norm(),
                });
            }
            Ok(w) => last = Some(LambertError::WrongBranch { k, w }),
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one seed"))
}

/// The Puiseux seed already selects the branch next to `−1/e`.
fn near_branch_point(x: Complex64, k: i32) -> bool {
    (E * x + 1.0).norm() < BRANCH_SERIES_RADIUS
        && match k {
            0 => true,
            -1 => from_above(x),
            1 => !from_above(x),
            _ => false,
        }
}

/// Whether `w` is the value of branch `k` at `x`, resolving values on a
/// region boundary (x on a cut) by nudging `x` towards the side it is taken
/// from.
fn on_branch(w: Complex64, x: Complex64, k: i32) -> bool {
    if !on_branch_boundary(w) {
        return branch_of(w) == k;
    }
    let side = if from_above(x) { 1.0 } else { -1.0 };
    let dx = Complex64::new(0.0, side * 1e-7 * x.norm());
    let inside = w + dx * w / (x * (1.0 + w));
    branch_of(inside) == k
}

/// Evaluation near `−1/e` from the Puiseux seed `−1 ± p − p²/3 + …`,
/// `p = √(2(ex+1))` (principal root). `Plus` lands on `W_0`; `Minus` on the
/// branch that meets `W_0` at `−1/e` from the side of `x`.
pub fn lambert_w_near_branch_point(
    x: Complex64,
    sheet: Sheet,
    tol: f64,
) -> Result<WValue, LambertError> {
    if !(tol > 0.0) {
        return Err(LambertError::BadTolerance(tol));
    }
    let p = (2.0 * (E * x + 1.0)).sqrt();
    let seed = match sheet {
        Sheet::Plus => branch_point_series(p),
        Sheet::Minus => branch_point_series(-p),
    };
    let w = halley(x, seed, tol)?;
    let branch = match sheet {
        Sheet::Plus => 0,
        Sheet::Minus if from_above(x) => -1,
        Sheet::Minus => 1,
    };
    Ok(WValue {
        w,
        branch: BranchIndex(branch),
        residual: (w * w.exp() - x).norm(),
    })
}

/// Branch region containing `w` (closure convention: the real half-line
/// `w ≤ −1` belongs to `W_{−1}`).
///
/// Region boundaries are the curves `a = −η cot η` (`w = a + iη`) for
/// `η ∈ (2jπ, (2j+1)π)` and their mirror images, plus `(−∞, −1]`.
pub fn branch_of(w: Complex64) -> i32 {
    let (a, eta) = (w.re, w.im);
    if eta == 0.0 {
        return if a > -1.0 { 0 } else { -1 };
    }
    let up = eta.abs();
    let j = (up / (2.0 * PI)).floor();
    let rem = up - 2.0 * PI * j;
    let j = j as i32;
    let k = if rem < PI && rem > 0.0 {
        let curve = -up / up.tan();
        let right = a > curve;
        match (j, right) {
            (0, true) => 0,
            (0, false) => 1,
            (j, true) => j,
            (j, false) => j + 1,
        }
    } else {
        j + 1
    };
    if eta > 0.0 {
        k
    } else {
        -k
    }
}

/// True when `w` sits within rounding distance of a region boundary.
pub fn on_branch_boundary(w: Complex64) -> bool {
    let (a, eta) = (w.re, w.im);
    let tol = 1e-9 * (1.0 + w.norm());
    if eta.abs() < tol && a <= -1.0 + tol {
        return true;
    }
    let up = eta.abs();
    let rem = up.rem_euclid(2.0 * PI);
    if rem < tol || (rem - PI).abs() < tol || (2.0 * PI - rem) < tol {
        return true;
    }
    if rem < PI {
        let curve = -up / up.tan();
        return (a - curve).abs() < tol * (1.0 + curve.abs());
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Bisection on t e^t over an interval where it is monotone.
    fn bisect(target: f64, mut lo: f64, mut hi: f64) -> f64 {
        let f = |t: f64| t * t.exp() - target;
        let flo = f(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn trivial_values() {
        assert_eq!(lambert_w(c(0.0, 0.0), 0, 1e-13).unwrap().w, c(0.0, 0.0));
        let w = lambert_w(c(E, 0.0), 0, 1e-13).unwrap().w;
        assert!((w - 1.0).norm() < 1e-14);
        for k in [0, -1] {
            let w = lambert_w(c(-1.0 / E, 0.0), k, 1e-13).unwrap().w;
            assert!((w + 1.0).norm() < 1e-7, "k={k}: {w}");
        }
    }

    #[test]
    fn zero_off_principal_is_domain_error() {
        assert!(matches!(
            lambert_w(c(0.0, 0.0), -1, 1e-13),
            Err(LambertError::ZeroOffPrincipal { k: -1 })
        ));
        assert!(matches!(
            lambert_w(c(1.0, 0.0), 0, 0.0),
            Err(LambertError::BadTolerance(_))
        ));
    }

    #[test]
    fn real_branches_match_bisection() {
        let w = lambert_w(c(-0.1, 0.0), -1, 1e-13).unwrap().w;
        let t = bisect(-0.1, -50.0, -1.0);
        assert!((w.re - t).abs() < 1e-12 && w.im.abs() < 1e-14, "{w} vs {t}");
        let w0 = lambert_w(c(-0.1, 0.0), 0, 1e-13).unwrap().w;
        let t0 = bisect(-0.1, -1.0, 0.0);
        assert!((w0.re - t0).abs() < 1e-14);
        assert!(w0.re > w.re);
    }

    #[test]
    fn cut_sides_follow_signed_zero() {
        let above = lambert_w(c(-0.1, 0.0), -1, 1e-13).unwrap().w;
        let below = lambert_w(c(-0.1, -0.0), 1, 1e-13).unwrap().w;
        assert!((above - below).norm() < 1e-12);
        assert!((above.re + 3.577152063957297).abs() < 1e-12);
        let far = lambert_w(c(-0.1, -0.0), -1, 1e-13).unwrap().w;
        assert!(far.im < -6.0, "{far}");
        // W_0 on its cut: limits from above and below are conjugate.
        let a = lambert_w(c(-2.0, 0.0), 0, 1e-13).unwrap().w;
        let b = lambert_w(c(-2.0, -0.0), 0, 1e-13).unwrap().w;
        assert!(a.im > 0.0 && (a - b.conj()).norm() < 1e-13);
        let x = c(-(0.06f64).exp(), 0.0);
        let w0 = lambert_w(x, 0, 1e-13).unwrap().w;
        let wm = lambert_w(x, -1, 1e-13).unwrap().w;
        assert!(w0.im > 0.0 && (w0 - wm.conj()).norm() < 1e-13, "{w0} {wm}");
        // W_1 below the cut continues W_0 above it
        let w1 = lambert_w(c(x.re, -0.0), 1, 1e-13).unwrap().w;
        assert!((w1 - w0).norm() < 1e-13);
    }

    #[test]
    fn branch_point_evaluator() {
        for sheet in [Sheet::Plus, Sheet::Minus] {
            let w = lambert_w_near_branch_point(c(-1.0 / E, 0.0), sheet, 1e-13).unwrap();
            assert!((w.w + 1.0).norm() < 1e-7);
        }
        let x = c(-(-1.01f64).exp(), 0.0);
        let plus = lambert_w_near_branch_point(x, Sheet::Plus, 1e-13).unwrap();
        let minus = lambert_w_near_branch_point(x, Sheet::Minus, 1e-13).unwrap();
        assert_eq!(plus.branch, BranchIndex(0));
        assert_eq!(minus.branch, BranchIndex(-1));
        let w0 = lambert_w(x, 0, 1e-13).unwrap().w;
        let wm = lambert_w(x, -1, 1e-13).unwrap().w;
        assert!((plus.w - w0).norm() <= 1e-10 * w0.norm());
        assert!((minus.w - wm).norm() <= 1e-10 * wm.norm());
    }

    #[test]
    fn evaluators_agree_near_branch_point() {
        for &(re, im) in &[
            (0.05, 0.02),
            (-0.05, 0.1),
            (0.1, -0.07),
            (-0.2, -0.01),
            (0.0, 0.15),
        ] {
            let x = c(-1.0 / E + re, im);
            let w0 = lambert_w(x, 0, 1e-13).unwrap().w;
            let bp = lambert_w_near_branch_point(x, Sheet::Plus, 1e-13)
                .unwrap()
                .w;
            assert!((w0 - bp).norm() <= 1e-10 * w0.norm());
            let k = if im >= 0.0 { -1 } else { 1 };
            let wk = lambert_w(x, k, 1e-13).unwrap().w;
            let bm = lambert_w_near_branch_point(x, Sheet::Minus, 1e-13)
                .unwrap()
                .w;
            assert!((wk - bm).norm() <= 1e-10 * wk.norm(), "{x}: {wk} vs {bm}");
        }
    }

    #[test]
    fn branch_region_classifier() {
        assert_eq!(branch_of(c(0.0, 0.0)), 0);
        assert_eq!(branch_of(c(-3.0, 0.0)), -1);
        assert_eq!(branch_of(c(-3.0, 1e-9)), 1);
        assert_eq!(branch_of(c(-3.0, -1e-9)), -1);
        assert_eq!(branch_of(c(1.0, 2.0 * PI + 1.0)), 1);
        assert_eq!(branch_of(c(1.0, -(4.0 * PI + 1.0))), -2);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn strip_ok(w: Complex64, k: i32) -> bool {
        let s = 1e-9;
        let im = w.im;
        match k {
            0 => im > -PI - s && im <= PI + s,
            k if k > 0 => im >= 2.0 * (k - 1) as f64 * PI - s && im <= (2 * k + 1) as f64 * PI + s,
            k => im >= (2 * k - 1) as f64 * PI - s && im <= 2.0 * (k + 1) as f64 * PI + s,
        }
    }

    proptest! {
        #[test]
        fn defining_relation_and_branch(logr in -3.0f64..3.0, phi in -3.1f64..3.1, k in -2i32..=2) {
            let x = Complex64::from_polar(10f64.powf(logr), phi);
            // stay off the cuts
            prop_assume!(x.im.abs() > 1e-6 * x.norm());
            let v = lambert_w(x, k, 1e-13).unwrap();
            let res = (v.w * v.w.exp() - x).norm();
            prop_assert!(res <= 1e-12 * x.norm().max(1.0), "res {res} at {x} k={k}");
            prop_assert!(v.residual <= 1e-13 * x.norm().max(1.0));
            prop_assert_eq!(branch_of(v.w), k, "w = {} for x = {}", v.w, x);
            prop_assert!(strip_ok(v.w, k));
        }

        #[test]
        fn real_branches_are_ordered(t in 0.001f64..0.999) {
            let x = Complex64::new(-t / E, 0.0);
            let w0 = lambert_w(x, 0, 1e-13).unwrap().w;
            let wm = lambert_w(x, -1, 1e-13).unwrap().w;
            prop_assert!(w0.re > wm.re);
            prop_assert!(w0.im.abs() < 1e-12 && wm.im.abs() < 1e-12);
        }
    }
}
