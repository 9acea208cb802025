//! Exact rational arithmetic for the formal series attached to `λ`.
//!
//! Everything here is exact: Bernoulli numbers, the Stirling series `μ̃`,
//! the sequence `a_k`, the series `λ̃ = Σ (2n+1)!! a_{2n+1} z^{−n}` and the
//! Puiseux expansions of the roots `q_±(ξ)` of `q − ln q − 1 = ξ`.
//!
//! Series are truncated objects. A [`RationalSeries`] knows its truncation
//! order and never pretends that coefficients past it are zero; binary
//! operations truncate to the smaller order of the two operands.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::surface::SurfacePoint;

/// Reduced fraction with a positive denominator.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq)]
pub enum SeriesError {
    #[error("formal exponential needs a zero constant term, found {0}")]
    NonZeroConstantTerm(String),
    #[error("exponent shifts differ ({0} vs {1})")]
    ShiftMismatch(String, String),
    #[error("formal exponential is only defined for integer exponent shift, got {0}")]
    FractionalShift(String),
    #[error("malformed series json: {0}")]
    Json(String),
}

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Bernoulli numbers `B_0..=B_nmax` with `B_1 = −1/2`, by the
/// Akiyama–Tanigawa algorithm.
pub fn bernoulli_numbers(nmax: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::with_capacity(nmax + 1);
    let mut out = Vec::with_capacity(nmax + 1);
    for m in 0..=nmax {
        row.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * int(j as i64);
        }
        out.push(row[0].clone());
    }
    // Akiyama–Tanigawa yields B_1 = +1/2.
    if nmax >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

pub fn bernoulli(n: usize) -> Rational {
    bernoulli_numbers(n).pop().expect("non-empty")
}

/// Formal series `Σ_n c_n z^{−(n + shift)}`, exact up to `truncation_order`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalSeries {
    coeffs: Vec<Rational>,
    shift: Rational,
    truncation_order: usize,
}

impl RationalSeries {
    /// Coefficients past `truncation_order` are dropped; missing ones up to it
    /// are filled with zero.
    pub fn new(mut coeffs: Vec<Rational>, shift: Rational, truncation_order: usize) -> Self {
        coeffs.resize(truncation_order + 1, Rational::zero());
        RationalSeries {
            coeffs,
            shift,
            truncation_order,
        }
    }

    pub fn zero(truncation_order: usize) -> Self {
        Self::new(Vec::new(), Rational::zero(), truncation_order)
    }

    pub fn one(truncation_order: usize) -> Self {
        Self::new(vec![Rational::one()], Rational::zero(), truncation_order)
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn shift(&self) -> &Rational {
        &self.shift
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^{−(n+shift)}`; `None` past the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&Rational> {
        self.coeffs.get(n)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.truncation_order);
        Self::new(self.coeffs[..=order].to_vec(), self.shift.clone(), order)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        if self.shift != other.shift {
            return Err(SeriesError::ShiftMismatch(
                self.shift.to_string(),
                other.shift.to_string(),
            ));
        }
        let n = self.truncation_order.min(other.truncation_order);
        let c = (0..=n)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Ok(Self::new(c, self.shift.clone(), n))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation_order.min(other.truncation_order);
        let mut c = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(n + 1 - i) {
                c[i + j] += a * b;
            }
        }
        Self::new(c, &self.shift + &other.shift, n)
    }

    /// Truncated formal exponential. The series must have integer shift and
    /// no `z^0` term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.shift.is_integer() {
            return Err(SeriesError::FractionalShift(self.shift.to_string()));
        }
        // Bring to shift 0: coefficient of w^n, w = 1/z.
        let s = self.shift.to_integer().to_i64().expect("small shift");
        let n = self.truncation_order as i64 + s;
        if n < 0 {
            return Ok(RationalSeries::one(0));
        }
        let n = n as usize;
        let mut w = vec![Rational::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            let k = i as i64 + s;
            if k < 0 {
                if !c.is_zero() {
                    return Err(SeriesError::NonZeroConstantTerm(format!(
                        "z^{} term {}",
                        -k, c
                    )));
                }
                continue;
            }
            if (k as usize) <= n {
                w[k as usize] = c.clone();
            }
        }
        if !w[0].is_zero() {
            return Err(SeriesError::NonZeroConstantTerm(w[0].to_string()));
        }
        // n e_n = Σ_{k=1}^{n} k w_k e_{n−k}
        let mut e = vec![Rational::zero(); n + 1];
        e[0] = Rational::one();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !w[k].is_zero() {
                    acc += &w[k] * &e[m - k] * int(k as i64);
                }
            }
            e[m] = acc / int(m as i64);
        }
        Ok(RationalSeries::new(e, Rational::zero(), n))
    }

    /// Evaluates the truncated sum at a complex `z` (principal powers).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z.inv();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * w + to_f64(c);
        }
        let s = to_f64(&self.shift);
        acc * z.powf(-s)
    }
}

impl fmt::Display for RationalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let e = Rational::from_integer(BigInt::from(n)) + &self.shift;
            write!(f, "({c}) z^-({e})")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^-{})", self.truncation_order + 1)
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    // Numerator and denominator can exceed the f64 range separately.
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() {
            return n / d;
        }
    }
    let e = r.numer().bits() as i64 - r.denom().bits() as i64;
    let shift = 64 - e;
    let q = if shift >= 0 {
        (r.numer() << shift as usize) / r.denom()
    } else {
        r.numer() / (r.denom() << (-shift) as usize)
    };
    q.to_f64().unwrap_or(f64::NAN) * 2f64.powi(-(shift as i32))
}

/// `μ̃(z) = Σ_{n≥0} B_{2n+2}/((2n+2)(2n+1)) z^{−2n−1}` through `z^{−order}`.
pub fn stirling_series(order: usize) -> RationalSeries {
    let b = bernoulli_numbers(order + 1);
    let mut c = vec![Rational::zero(); order + 1];
    for (k, slot) in c.iter_mut().enumerate().skip(1).step_by(2) {
        // k = 2n+1
        let m = k as i64 + 1;
        *slot = b[k + 1].clone() / int(m * (m - 1));
    }
    RationalSeries::new(c, Rational::zero(), order)
}

/// `a_1..=a_kmax`: `a_1 = 1`,
/// `a_k = (a_{k−1} − Σ_{ℓ=2}^{k−1} ℓ a_ℓ a_{k+1−ℓ}) / (k+1)`.
pub fn a_coefficients(kmax: usize) -> Vec<Rational> {
    assert!(kmax >= 1, "kmax must be at least 1");
    // a[0] is unused padding so that a[k] is a_k.
    let mut a = vec![Rational::zero(); kmax + 1];
    a[1] = Rational::one();
    for k in 2..=kmax {
        let mut s = a[k - 1].clone();
        for l in 2..k {
            s -= &a[l] * &a[k + 1 - l] * int(l as i64);
        }
        a[k] = s / int(k as i64 + 1);
    }
    a.remove(0);
    a
}

/// `(2n+1)!!` as an exact integer.
pub fn double_factorial_odd(n: usize) -> BigInt {
    (0..=n).fold(BigInt::one(), |acc, j| acc * BigInt::from(2 * j + 1))
}

/// `λ̃(z) = Σ_{n=0}^{order} (2n+1)!! a_{2n+1} z^{−n}`.
pub fn lambda_tilde(order: usize) -> RationalSeries {
    let a = a_coefficients(2 * order + 1);
    let c = (0..=order)
        .map(|n| Rational::from_integer(double_factorial_odd(n)) * &a[2 * n])
        .collect();
    RationalSeries::new(c, Rational::zero(), order)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootSign {
    Plus,
    Minus,
}

/// Series in `s = (2ξ)^{1/2}`: `prefactor · Σ_k c_k s^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PuiseuxSeries {
    coeffs: Vec<Rational>,
    prefactor: Complex64,
    truncation_order: usize,
}

impl PuiseuxSeries {
    pub fn new(mut coeffs: Vec<Rational>, prefactor: Complex64, truncation_order: usize) -> Self {
        coeffs.resize(truncation_order + 1, Rational::zero());
        PuiseuxSeries {
            coeffs,
            prefactor,
            truncation_order,
        }
    }

    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn prefactor(&self) -> Complex64 {
        self.prefactor
    }

    pub fn truncation_order(&self) -> usize {
        self.truncation_order
    }

    pub fn with_prefactor(mut self, p: Complex64) -> Self {
        self.prefactor = p;
        self
    }

    /// Exact sum and difference only make sense for equal prefactors.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.truncation_order.min(other.truncation_order);
        let c = (0..=n)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Self::new(c, self.prefactor, n)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.truncation_order.min(other.truncation_order);
        let c = (0..=n)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        Self::new(c, self.prefactor, n)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.truncation_order.min(other.truncation_order);
        let mut c = vec![Rational::zero(); n + 1];
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                c[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        Self::new(c, self.prefactor * other.prefactor, n)
    }

    /// `ln(1 + u)` for a series `u` with zero constant term (prefactor ignored).
    pub fn log1p(&self) -> Result<Self, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstantTerm(self.coeffs[0].to_string()));
        }
        let n = self.truncation_order;
        let mut out = vec![Rational::zero(); n + 1];
        let mut power = self.clone().with_prefactor(Complex64::new(1.0, 0.0));
        for j in 1..=n {
            let sign = if j % 2 == 1 { int(1) } else { int(-1) };
            for (k, c) in power.coeffs.iter().enumerate() {
                out[k] += c * &sign / int(j as i64);
            }
            power = power.mul(self);
        }
        Ok(Self::new(out, Complex64::new(1.0, 0.0), n))
    }

    /// For `Q = self` with `Q(0) = 1`, the series of `Q − ln Q − 1`.
    pub fn log_defect(&self) -> Result<Self, SeriesError> {
        let mut u = self.clone();
        u.coeffs[0] -= Rational::one();
        let l = u.log1p()?;
        Ok(u.sub(&l))
    }

    /// Evaluates `prefactor · Σ c_k s^k` with `s = (2ξ)^{1/2}` taken on the
    /// sheet of `xi`.
    pub fn eval(&self, xi: SurfacePoint) -> Complex64 {
        let s = xi.scale(2.0).sqrt();
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * s + to_f64(c);
        }
        acc * self.prefactor
    }

    /// Magnitude of the last retained term, a crude remainder estimate.
    pub fn last_term_magnitude(&self, xi: SurfacePoint) -> f64 {
        let s = (2.0 * xi.r).sqrt();
        let k = self.truncation_order;
        to_f64(&self.coeffs[k]).abs() * s.powi(k as i32) * self.prefactor.norm()
    }
}

/// `q_±(ξ) = 1 + Σ_{k≥1} (±1)^k a_k (2ξ)^{k/2}`.
pub fn puiseux_q(sign: RootSign, kmax: usize) -> PuiseuxSeries {
    let a = a_coefficients(kmax.max(1));
    let mut c = vec![Rational::one()];
    for k in 1..=kmax {
        let v = a[k - 1].clone();
        c.push(if sign == RootSign::Minus && k % 2 == 1 {
            -v
        } else {
            v
        });
    }
    PuiseuxSeries::new(c, Complex64::new(1.0, 0.0), kmax)
}

/// JSON shape `{ "shift": "p/q", "coeffs": [["num","den"], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub shift: String,
    pub coeffs: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<[f64; 2]>,
}

fn rational_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

fn parse_rational(s: &str) -> Result<Rational, SeriesError> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n
        .trim()
        .parse()
        .map_err(|_| SeriesError::Json(format!("bad integer {n:?}")))?;
    let d: BigInt = d
        .trim()
        .parse()
        .map_err(|_| SeriesError::Json(format!("bad integer {d:?}")))?;
    if d.is_zero() {
        return Err(SeriesError::Json("zero denominator".into()));
    }
    Ok(Rational::new(n, d))
}

impl From<&RationalSeries> for SeriesJson {
    fn from(s: &RationalSeries) -> Self {
        SeriesJson {
            shift: s.shift.to_string(),
            coeffs: s.coeffs.iter().map(rational_pair).collect(),
            prefactor: None,
        }
    }
}

impl TryFrom<&SeriesJson> for RationalSeries {
    type Error = SeriesError;

    fn try_from(j: &SeriesJson) -> Result<Self, Self::Error> {
        let shift = parse_rational(&j.shift)?;
        if j.coeffs.is_empty() {
            return Err(SeriesError::Json("empty coefficient list".into()));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|[n, d]| parse_rational(&format!("{n}/{d}")))
            .collect::<Result<Vec<_>, _>>()?;
        let order = coeffs.len() - 1;
        Ok(RationalSeries::new(coeffs, shift, order))
    }
}

impl From<&PuiseuxSeries> for SeriesJson {
    fn from(s: &PuiseuxSeries) -> Self {
        SeriesJson {
            shift: "0".into(),
            coeffs: s.coeffs.iter().map(rational_pair).collect(),
            prefactor: Some([s.prefactor.re, s.prefactor.im]),
        }
    }
}

impl TryFrom<&SeriesJson> for PuiseuxSeries {
    type Error = SeriesError;

    fn try_from(j: &SeriesJson) -> Result<Self, Self::Error> {
        let r = RationalSeries::try_from(j)?;
        if !r.shift.is_zero() {
            return Err(SeriesError::Json("puiseux series carry shift 0".into()));
        }
        let p = j
            .prefactor
            .map(|[a, b]| Complex64::new(a, b))
            .unwrap_or(Complex64::new(1.0, 0.0));
        let n = r.truncation_order;
        Ok(PuiseuxSeries::new(r.coeffs, p, n))
    }
}

impl RationalSeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&SeriesJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, SeriesError> {
        let j: SeriesJson =
            serde_json::from_str(s).map_err(|e| SeriesError::Json(e.to_string()))?;
        RationalSeries::try_from(&j)
    }
}

/// Exact check of `(k+1)a_k − a_{k−1} + Σ_{ℓ=2}^{k−1} ℓ a_ℓ a_{k+1−ℓ} = 0`.
pub fn recursion_residual(a: &[Rational], k: usize) -> Rational {
    assert!(k >= 2 && k <= a.len());
    let at = |i: usize| &a[i - 1];
    let mut r = at(k) * int(k as i64 + 1) - at(k - 1);
    for l in 2..k {
        r += at(l) * at(k + 1 - l) * int(l as i64);
    }
    r
}

/// gcd of numerator and denominator, exposed for invariant checks.
pub fn is_reduced(r: &Rational) -> bool {
    r.denom().is_positive() && r.numer().gcd(r.denom()).is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Independent oracle: Σ_{k=0}^{n} C(n+1,k) B_k = 0.
    fn bernoulli_by_binomial(nmax: usize) -> Vec<Rational> {
        let mut b: Vec<Rational> = vec![Rational::one()];
        for n in 1..=nmax {
            let mut binom = BigInt::one();
            let mut s = Rational::zero();
            for (k, bk) in b.iter().enumerate() {
                s += Rational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-s / int(n as i64 + 1));
        }
        b
    }

    #[test]
    fn bernoulli_examples() {
        assert_eq!(bernoulli(0), q(1, 1));
        assert_eq!(bernoulli(1), q(-1, 2));
        assert_eq!(bernoulli(2), q(1, 6));
        assert_eq!(bernoulli(12), q(-691, 2730));
    }

    #[test]
    fn akiyama_tanigawa_matches_binomial_recurrence() {
        assert_eq!(bernoulli_numbers(40), bernoulli_by_binomial(40));
    }

    #[test]
    fn stirling_coefficients() {
        let mu = stirling_series(7);
        assert_eq!(mu.coeff(0), Some(&q(0, 1)));
        assert_eq!(mu.coeff(1), Some(&q(1, 12)));
        assert_eq!(mu.coeff(2), Some(&q(0, 1)));
        assert_eq!(mu.coeff(3), Some(&q(-1, 360)));
        assert_eq!(mu.coeff(5), Some(&q(1, 1260)));
        assert_eq!(mu.coeff(8), None);
        for k in (0..=7).step_by(2) {
            assert!(mu.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn a_sequence_values() {
        let a = a_coefficients(7);
        let expect = [
            q(1, 1),
            q(1, 3),
            q(1, 36),
            q(-1, 270),
            q(1, 4320),
            q(1, 17010),
            q(-139, 5443200),
        ];
        assert_eq!(a, expect);
        assert!(a.iter().all(is_reduced));
    }

    #[test]
    fn a_recursion_holds_exactly() {
        let a = a_coefficients(20);
        for k in 2..=20 {
            assert!(recursion_residual(&a, k).is_zero(), "k = {k}");
        }
    }

    #[test]
    fn exp_of_zero_is_one() {
        let e = RationalSeries::zero(5).exp().unwrap();
        assert_eq!(e, RationalSeries::one(5));
    }

    #[test]
    fn exp_rejects_constant_term() {
        let s = RationalSeries::new(vec![q(1, 2), q(1, 1)], Rational::zero(), 3);
        assert!(matches!(s.exp(), Err(SeriesError::NonZeroConstantTerm(_))));
        let s = RationalSeries::new(vec![q(1, 1)], q(1, 2), 3);
        assert!(matches!(s.exp(), Err(SeriesError::FractionalShift(_))));
    }

    #[test]
    fn exp_of_stirling_low_orders() {
        let e = stirling_series(6).exp().unwrap();
        assert_eq!(e.coeff(0), Some(&q(1, 1)));
        assert_eq!(e.coeff(1), Some(&q(1, 12)));
        assert_eq!(e.coeff(2), Some(&q(1, 288)));
        let a = a_coefficients(5);
        assert_eq!(e.coeff(1).unwrap(), &(&a[2] * int(3)));
        assert_eq!(e.coeff(2).unwrap(), &(&a[4] * int(15)));
    }

    #[test]
    fn lambda_tilde_equals_exp_mu() {
        let n = 25;
        let lt = lambda_tilde(n);
        let em = stirling_series(n).exp().unwrap();
        assert_eq!(em.truncation_order(), n);
        for k in 0..=n {
            assert_eq!(lt.coeff(k), em.coeff(k), "coefficient of z^-{k}");
        }
        assert_eq!(lt.coeff(2), Some(&q(1, 288)));
    }

    #[test]
    fn puiseux_coefficients() {
        let qp = puiseux_q(RootSign::Plus, 6);
        let qm = puiseux_q(RootSign::Minus, 6);
        assert_eq!(qp.coeff(0), Some(&q(1, 1)));
        assert_eq!(qm.coeff(0), Some(&q(1, 1)));
        assert_eq!(qp.coeff(1), Some(&q(1, 1)));
        assert_eq!(qm.coeff(1), Some(&q(-1, 1)));
        assert_eq!(qm.coeff(4), Some(&q(-1, 270)));
    }

    #[test]
    fn puiseux_parity() {
        let qp = puiseux_q(RootSign::Plus, 15);
        let qm = puiseux_q(RootSign::Minus, 15);
        let d = qp.sub(&qm);
        let mut s = qp.add(&qm);
        s.coeffs[0] -= int(2);
        for k in 0..=15 {
            if k % 2 == 0 {
                assert!(d.coeff(k).unwrap().is_zero());
            } else {
                assert!(s.coeff(k).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn puiseux_roots_solve_defining_equation() {
        // Q − ln Q − 1 = ξ = s²/2
        for sign in [RootSign::Plus, RootSign::Minus] {
            let d = puiseux_q(sign, 18).log_defect().unwrap();
            for k in 0..=18 {
                let want = if k == 2 { q(1, 2) } else { q(0, 1) };
                assert_eq!(d.coeff(k), Some(&want), "{sign:?} k={k}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let mu = stirling_series(3);
        let j = mu.to_json();
        assert_eq!(
            j,
            r#"{"shift":"0","coeffs":[["0","1"],["1","12"],["0","1"],["-1","360"]]}"#
        );
        assert_eq!(RationalSeries::from_json(&j).unwrap(), mu);
        assert!(RationalSeries::from_json(r#"{"shift":"0","coeffs":[["1","0"]]}"#).is_err());
    }

    #[test]
    fn big_rationals_convert() {
        let huge = Rational::new(BigInt::from(10).pow(400) + 1, BigInt::from(10).pow(400) * 3);
        assert!((to_f64(&huge) - 1.0 / 3.0).abs() < 1e-15);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn arb_series() -> impl Strategy<Value = RationalSeries> {
        prop::collection::vec((-50i64..50, 1i64..20), 1..8).prop_map(|v| {
            let mut c: Vec<Rational> = v
                .into_iter()
                .map(|(n, d)| Rational::new(n.into(), d.into()))
                .collect();
            c[0] = Rational::zero();
            let n = c.len() - 1;
            RationalSeries::new(c, Rational::zero(), n)
        })
    }

    proptest! {
        #[test]
        fn exp_is_a_homomorphism(a in arb_series(), b in arb_series()) {
            let lhs = a.add(&b).unwrap().exp().unwrap();
            let rhs = a.exp().unwrap().mul(&b.exp().unwrap());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn json_roundtrip(a in arb_series()) {
            prop_assert_eq!(RationalSeries::from_json(&a.to_json()).unwrap(), a);
        }
    }
}
