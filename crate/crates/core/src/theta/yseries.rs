//! Truncated Laurent series in the normalized variable `y = πv` with
//! [`QExpansion`] coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::{QExpansion, EXACT};
use crate::scalars::Scalar;

/// Parity tag in `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    None,
}

impl Parity {
    fn of_degree(m: i64) -> Parity {
        if m.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    fn combine(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::None, _) | (_, Parity::None) => Parity::None,
            (a, b) if a == b => Parity::Even,
            _ => Parity::Odd,
        }
    }

    fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::None => Parity::None,
        }
    }
}

/// `Σ_m c_m(q)·y^m` for `m < y_trunc`.
#[derive(Clone, Debug, PartialEq)]
pub struct YSeries {
    coeffs: BTreeMap<i64, QExpansion>,
    y_trunc: i64,
    parity: Parity,
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

impl YSeries {
    /// Builds a series, dropping degrees at or above `y_trunc` and exact zeros.
    /// The parity tag is inferred from the stored degrees.
    pub fn new(coeffs: impl IntoIterator<Item = (i64, QExpansion)>, y_trunc: i64) -> Self {
        let coeffs: BTreeMap<i64, QExpansion> = coeffs
            .into_iter()
            .filter(|(m, c)| *m < y_trunc && !(c.is_zero() && c.is_exact()))
            .collect();
        let mut s = YSeries {
            coeffs,
            y_trunc,
            parity: Parity::None,
        };
        s.parity = s.scan_parity();
        s
    }

    pub fn constant(c: QExpansion, y_trunc: i64) -> Self {
        Self::new([(0, c)], y_trunc)
    }

    pub fn one(y_trunc: i64) -> Self {
        Self::constant(QExpansion::one(), y_trunc)
    }

    /// Exact `c·y^m`.
    pub fn monomial(m: i64, c: Scalar, y_trunc: i64) -> Self {
        Self::new([(m, QExpansion::constant(c))], y_trunc)
    }

    /// Builds from rational coefficients of `y^m` (exact in q).
    fn from_rationals(terms: impl IntoIterator<Item = (i64, BigRational)>, y_trunc: i64) -> Self {
        Self::new(
            terms
                .into_iter()
                .map(|(m, r)| (m, QExpansion::constant(Scalar::from_rational(r)))),
            y_trunc,
        )
    }

    /// `sin(a·y)` for rational `a`.
    pub fn sin(a: &BigRational, y_trunc: i64) -> Self {
        Self::from_rationals(
            (0..)
                .map(|k| 2 * k + 1)
                .take_while(|m| *m < y_trunc)
                .map(|m| {
                    let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
                    let num = a.pow(m as i32) * BigInt::from(sign);
                    (m, num / BigRational::from_integer(factorial(m as u64)))
                }),
            y_trunc,
        )
    }

    /// `cos(a·y)` for rational `a`.
    pub fn cos(a: &BigRational, y_trunc: i64) -> Self {
        Self::from_rationals(
            (0..)
                .map(|k| 2 * k)
                .take_while(|m| *m < y_trunc)
                .map(|m| {
                    let sign = if (m / 2) % 2 == 0 { 1 } else { -1 };
                    let num = a.pow(m as i32) * BigInt::from(sign);
                    (m, num / BigRational::from_integer(factorial(m as u64)))
                }),
            y_trunc,
        )
    }

    /// `exp(s·y)` for an arbitrary scalar `s`.
    pub fn exp(s: &Scalar, y_trunc: i64) -> Self {
        let mut terms = Vec::new();
        let mut p = Scalar::one();
        for m in 0..y_trunc.max(0) {
            if m > 0 {
                p = &p * s;
            }
            let c = p.scale_rational(&BigRational::from_integer(factorial(m as u64)).recip());
            terms.push((m, QExpansion::constant(c)));
        }
        Self::new(terms, y_trunc)
    }

    pub fn y_trunc(&self) -> i64 {
        self.y_trunc
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, QExpansion> {
        &self.coeffs
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &QExpansion)> {
        self.coeffs.iter().map(|(m, c)| (*m, c))
    }

    /// Coefficient of `y^m`; an exact zero when absent.
    pub fn coeff(&self, m: i64) -> QExpansion {
        self.coeffs.get(&m).cloned().unwrap_or_default()
    }

    /// Value at `y = 0` (the `y⁰` coefficient).
    pub fn at_zero(&self) -> QExpansion {
        self.coeff(0)
    }

    /// Smallest `q`-truncation among the stored coefficients.
    pub fn q_trunc(&self) -> i64 {
        self.coeffs.values().map(QExpansion::trunc).min().unwrap_or(EXACT)
    }

    /// Lowest degree with a known nonzero coefficient; `y_trunc` if none.
    pub fn valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .find(|(_, c)| !c.is_zero())
            .map(|(m, _)| *m)
            .unwrap_or(self.y_trunc)
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(QExpansion::is_zero)
    }

    /// True when `self − other` vanishes to the common truncation.
    pub fn agrees_with(&self, other: &YSeries) -> bool {
        (self - other).is_zero()
    }

    /// Parity read off the nonzero coefficients.
    pub fn scan_parity(&self) -> Parity {
        let mut degrees = self.coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(m, _)| *m);
        let Some(first) = degrees.next() else {
            return Parity::Even;
        };
        let p = Parity::of_degree(first);
        if degrees.all(|m| Parity::of_degree(m) == p) {
            p
        } else {
            Parity::None
        }
    }

    /// True when the tag agrees with a coefficient scan.
    pub fn parity_consistent(&self) -> bool {
        match self.parity {
            Parity::None => true,
            p => self
                .coeffs
                .iter()
                .all(|(m, c)| c.is_zero() || Parity::of_degree(*m) == p),
        }
    }

    pub fn truncate_y(&self, t: i64) -> Self {
        if t >= self.y_trunc {
            return self.clone();
        }
        YSeries {
            coeffs: self.coeffs.range(..t).map(|(m, c)| (*m, c.clone())).collect(),
            y_trunc: t,
            parity: self.parity,
        }
    }

    pub fn truncate_q(&self, t: i64) -> Self {
        self.map(|c| c.truncate(t))
    }

    fn map(&self, f: impl Fn(&QExpansion) -> QExpansion) -> Self {
        let mut s = Self::new(self.coeffs.iter().map(|(m, c)| (*m, f(c))), self.y_trunc);
        if s.parity == Parity::Even && self.parity != Parity::Even && s.coeffs.is_empty() {
            s.parity = self.parity;
        }
        s
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn scale_q(&self, f: &QExpansion) -> Self {
        self.map(|c| c * f)
    }

    /// Multiplies every coefficient by π^d.
    pub fn shift_pi(&self, d: i32) -> Self {
        self.map(|c| c.shift_pi(d))
    }

    /// Multiplies by `y^k`.
    pub fn shift_y(&self, k: i64) -> Self {
        YSeries {
            coeffs: self.coeffs.iter().map(|(m, c)| (m + k, c.clone())).collect(),
            y_trunc: self.y_trunc + k,
            parity: if k % 2 == 0 { self.parity } else { self.parity.flip() },
        }
    }

    /// τ ↦ τ+1 on every coefficient.
    pub fn tau_shift(&self) -> Self {
        self.map(QExpansion::tau_shift)
    }

    /// `∂/∂v = π·∂/∂y`.
    pub fn theta_prime(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter(|(m, _)| **m != 0)
            .map(|(m, c)| (m - 1, c.scale(&Scalar::from_int(*m).shift_pi(1))));
        let mut s = Self::new(coeffs, self.y_trunc - 1);
        if s.coeffs.is_empty() {
            s.parity = self.parity.flip();
        }
        s
    }

    /// Product with the q-truncation of every coefficient capped at `q_cap`.
    pub fn mul_to(&self, other: &YSeries, q_cap: i64) -> YSeries {
        let va = self.valuation();
        let vb = other.valuation();
        let y_trunc = (self.y_trunc + vb).min(other.y_trunc + va);
        let mut acc: BTreeMap<i64, QExpansion> = BTreeMap::new();
        for (ma, ca) in &self.coeffs {
            for (mb, cb) in &other.coeffs {
                let m = ma + mb;
                if m >= y_trunc {
                    break;
                }
                let p = ca.mul_to(cb, q_cap);
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let mut s = Self::new(acc, y_trunc);
        let p = self.parity.combine(other.parity);
        if p != Parity::None && s.parity_consistent_with(p) {
            s.parity = p;
        }
        s
    }

    fn parity_consistent_with(&self, p: Parity) -> bool {
        self.coeffs
            .iter()
            .all(|(m, c)| c.is_zero() || Parity::of_degree(*m) == p)
    }

    /// Multiplicative inverse via `c₀ = b₀⁻¹`, `c_n = −c₀·Σ_{i≥1} b_i c_{n−i}`.
    ///
    /// The result has valuation `−v` and `y_trunc − 2v`.
    pub fn inv(&self) -> Result<YSeries> {
        let v = self.valuation();
        if v >= self.y_trunc {
            return Err(Error::NonInvertible("zero y-series".into()));
        }
        let lead = self.coeffs[&v].clone();
        let c0 = lead.inv()?;
        let len = self.y_trunc - v;
        let rest: Vec<(i64, &QExpansion)> = self
            .coeffs
            .range(v + 1..)
            .map(|(m, c)| (m - v, c))
            .collect();
        let mut c: Vec<QExpansion> = Vec::with_capacity(len as usize);
        c.push(c0.clone());
        for n in 1..len {
            let mut s = QExpansion::exact_zero();
            for (i, bi) in &rest {
                if *i > n {
                    break;
                }
                s = &s + &(*bi * &c[(n - i) as usize]);
            }
            c.push(-(&c0 * &s));
        }
        let mut out = Self::new(
            c.into_iter().enumerate().map(|(n, q)| (n as i64 - v, q)),
            self.y_trunc - 2 * v,
        );
        if self.parity != Parity::None {
            let p = if v % 2 == 0 { Parity::Even } else { Parity::Odd };
            if out.parity_consistent_with(p) {
                out.parity = p;
            }
        }
        Ok(out)
    }

    /// Laurent quotient `a / b`.
    pub fn y_div(&self, b: &YSeries) -> Result<YSeries> {
        Ok(self * &b.inv()?)
    }

    /// Value at `v` and `τ` from `Σ q_eval(c_m)·(πv)^m`, with a tail estimate
    /// summing the q-tail bounds of the coefficients.
    pub fn eval(&self, v: Complex64, tau: Complex64) -> Result<(Complex64, f64)> {
        let y = v * std::f64::consts::PI;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut tail = 0.0;
        for (m, c) in &self.coeffs {
            let (val, t) = c.eval(tau)?;
            let ym = y.powi(*m as i32);
            sum += val * ym;
            tail += t * ym.norm();
        }
        Ok((sum, tail))
    }

    /// The odd part `Σ c_{2k+1} y^{2k+1}` as `(k, c)` pairs.
    pub fn odd_coeffs(&self) -> impl Iterator<Item = (i64, &QExpansion)> {
        self.coeffs
            .iter()
            .filter(|(m, _)| m.rem_euclid(2) == 1)
            .map(|(m, c)| ((m - 1) / 2, c))
    }
}

impl<'a> Add<&'a YSeries> for &'a YSeries {
    type Output = YSeries;
    fn add(self, rhs: &YSeries) -> YSeries {
        let y_trunc = self.y_trunc.min(rhs.y_trunc);
        let mut acc: BTreeMap<i64, QExpansion> = self.coeffs.range(..y_trunc).map(|(m, c)| (*m, c.clone())).collect();
        for (m, c) in rhs.coeffs.range(..y_trunc) {
            match acc.get_mut(m) {
                Some(e) => *e = &*e + c,
                None => {
                    acc.insert(*m, c.clone());
                }
            }
        }
        let mut s = YSeries::new(acc, y_trunc);
        if self.parity == rhs.parity && self.parity != Parity::None && s.parity_consistent_with(self.parity) {
            s.parity = self.parity;
        }
        s
    }
}

impl Neg for &YSeries {
    type Output = YSeries;
    fn neg(self) -> YSeries {
        YSeries {
            coeffs: self.coeffs.iter().map(|(m, c)| (*m, -c)).collect(),
            y_trunc: self.y_trunc,
            parity: self.parity,
        }
    }
}

impl<'a> Sub<&'a YSeries> for &'a YSeries {
    type Output = YSeries;
    fn sub(self, rhs: &YSeries) -> YSeries {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a YSeries> for &'a YSeries {
    type Output = YSeries;
    fn mul(self, rhs: &YSeries) -> YSeries {
        self.mul_to(rhs, EXACT)
    }
}

#[derive(Serialize)]
struct YTermJson<'a> {
    y_degree: i64,
    #[serde(flatten)]
    series: &'a QExpansion,
}

impl Serialize for YSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.coeffs.iter().map(|(m, c)| YTermJson {
            y_degree: *m,
            series: c,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn sin_cos_pythagoras() {
        let s = YSeries::sin(&r(1, 1), 12);
        let c = YSeries::cos(&r(1, 1), 12);
        assert_eq!(s.parity(), Parity::Odd);
        assert_eq!(c.parity(), Parity::Even);
        let one = &(&s * &s) + &(&c * &c);
        assert_eq!(one, YSeries::one(12));
    }

    #[test]
    fn exp_of_imaginary_is_cos_plus_i_sin() {
        let e = YSeries::exp(&Scalar::i(), 10);
        let rhs = &YSeries::cos(&r(1, 1), 10) + &YSeries::sin(&r(1, 1), 10).scale(&Scalar::i());
        assert_eq!(e, rhs);
    }

    #[test]
    fn inverse_of_sin_over_y() {
        // y / sin y = 1 + y²/6 + 7y⁴/360 + …
        let s = YSeries::sin(&r(1, 1), 9);
        let inv = s.inv().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.y_trunc(), 7);
        let unit = inv.shift_y(1);
        assert_eq!(unit.coeff(0), QExpansion::one());
        assert_eq!(unit.coeff(2), QExpansion::constant(Scalar::from_ratio(1, 6)));
        assert_eq!(unit.coeff(4), QExpansion::constant(Scalar::from_ratio(7, 360)));
        assert_eq!(unit.parity(), Parity::Even);
    }

    #[test]
    fn self_division_is_one() {
        let c = YSeries::cos(&r(2, 1), 8).scale_q(&QExpansion::from_ints(&[(0, 1), (8, 3)], 40));
        let q = c.y_div(&c).unwrap();
        assert!(q.agrees_with(&YSeries::one(8)));
        assert_eq!(q.q_trunc(), 40);
    }

    #[test]
    fn derivative_carries_pi() {
        let s = YSeries::sin(&r(1, 1), 6);
        let d = s.theta_prime();
        assert_eq!(d.parity(), Parity::Even);
        assert_eq!(d.y_trunc(), 5);
        assert_eq!(d.coeff(0), QExpansion::constant(Scalar::pi_pow(1)));
        assert_eq!(d.coeff(2), QExpansion::constant(Scalar::from_ratio(-1, 2).shift_pi(1)));
    }

    #[test]
    fn eval_matches_sine() {
        let s = YSeries::sin(&r(1, 1), 30);
        let v = Complex64::new(0.3, 0.1);
        let (val, tail) = s.eval(v, Complex64::new(0.0, 1.0)).unwrap();
        assert!((val - (v * std::f64::consts::PI).sin()).norm() < 1e-12);
        assert_eq!(tail, 0.0);
    }
}
