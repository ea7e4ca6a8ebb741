//! Truncated Puiseux series in q with exponents in (1/8)ℤ.
//!
//! A term `n ↦ c` stands for `c·q^{n/8}`. Every series carries an exclusive
//! truncation numerator: exponents at or above it are unknown. Exact
//! polynomials use the sentinel [`EXACT`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// Truncation numerator marking an exact (untruncated) series.
pub const EXACT: i64 = i64::MAX / 4;

/// Exponent denominator shared by every series.
pub const DENOM: i64 = 8;

fn sat_add(a: i64, b: i64) -> i64 {
    if a >= EXACT || b >= EXACT {
        EXACT
    } else {
        (a + b).min(EXACT)
    }
}

/// `Σ c_n q^{n/8}`, known for exponents below `trunc / 8`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExpansion {
    terms: BTreeMap<i64, Scalar>,
    trunc: i64,
}

impl QExpansion {
    /// The zero series known up to (exclusive) numerator `trunc`.
    pub fn zero(trunc: i64) -> Self {
        QExpansion {
            terms: BTreeMap::new(),
            trunc: trunc.min(EXACT),
        }
    }

    pub fn exact_zero() -> Self {
        Self::zero(EXACT)
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    /// Exact constant series.
    pub fn constant(c: Scalar) -> Self {
        Self::monomial(0, c)
    }

    /// Exact monomial `c·q^{n/8}`.
    pub fn monomial(n: i64, c: Scalar) -> Self {
        Self::from_terms([(n, c)], EXACT)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Scalar)>, trunc: i64) -> Self {
        let trunc = trunc.min(EXACT);
        let mut map: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (n, c) in terms {
            if n >= trunc {
                continue;
            }
            *map.entry(n).or_default() += &c;
        }
        map.retain(|_, c| !c.is_zero());
        QExpansion { terms: map, trunc }
    }

    /// Integer-coefficient series from `(numerator, value)` pairs.
    pub fn from_ints(terms: &[(i64, i64)], trunc: i64) -> Self {
        Self::from_terms(terms.iter().map(|&(n, c)| (n, Scalar::from_int(c))), trunc)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc >= EXACT
    }

    /// `trunc_num` as exposed in JSON: `None` for exact series.
    pub fn trunc_num(&self) -> Option<i64> {
        (!self.is_exact()).then_some(self.trunc)
    }

    pub fn terms(&self) -> &BTreeMap<i64, Scalar> {
        &self.terms
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.terms.iter().map(|(n, c)| (*n, c))
    }

    /// Coefficient of `q^{n/8}`; zero when absent (callers must respect `trunc`).
    pub fn coeff(&self, n: i64) -> Scalar {
        self.terms.get(&n).cloned().unwrap_or_default()
    }

    /// True when no known coefficient is nonzero.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent numerator with a nonzero coefficient; `trunc` for zero.
    pub fn valuation(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    /// Lowers the truncation bound to `min(trunc, t)`.
    pub fn truncate(&self, t: i64) -> Self {
        if t >= self.trunc {
            return self.clone();
        }
        QExpansion {
            terms: self.terms.range(..t).map(|(n, c)| (*n, c.clone())).collect(),
            trunc: t,
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_one() {
            return self.clone();
        }
        let mut terms = BTreeMap::new();
        for (n, c) in &self.terms {
            let p = c * s;
            if !p.is_zero() {
                terms.insert(*n, p);
            }
        }
        QExpansion {
            terms,
            trunc: self.trunc,
        }
    }

    /// Multiplies every coefficient by π^d.
    pub fn shift_pi(&self, d: i32) -> Self {
        if d == 0 {
            return self.clone();
        }
        QExpansion {
            terms: self.terms.iter().map(|(n, c)| (*n, c.shift_pi(d))).collect(),
            trunc: self.trunc,
        }
    }

    /// Multiplies by `q^{k/8}`.
    pub fn shift_q(&self, k: i64) -> Self {
        QExpansion {
            terms: self.terms.iter().map(|(n, c)| (n + k, c.clone())).collect(),
            trunc: sat_add(self.trunc, k),
        }
    }

    /// Product with its truncation additionally capped at `cap`.
    pub fn mul_to(&self, other: &QExpansion, cap: i64) -> QExpansion {
        let natural = sat_add(self.trunc, other.valuation()).min(sat_add(other.trunc, self.valuation()));
        let trunc = natural.min(cap).min(EXACT);
        let mut acc: BTreeMap<i64, Scalar> = BTreeMap::new();
        for (na, ca) in &self.terms {
            for (nb, cb) in &other.terms {
                let n = na + nb;
                if n >= trunc {
                    break;
                }
                *acc.entry(n).or_default() += &(ca * cb);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        QExpansion { terms: acc, trunc }
    }

    /// Multiplicative inverse.
    ///
    /// The lowest coefficient must be a unit (a single-π-degree scalar). The
    /// result has valuation `−v` and truncation `trunc − 2v`.
    pub fn inv(&self) -> Result<QExpansion> {
        let (&v, lead) = self
            .terms
            .iter()
            .next()
            .ok_or_else(|| Error::NonInvertible("0".into()))?;
        let lead_inv = lead
            .inv()
            .ok_or_else(|| Error::NonInvertible(lead.to_string()))?;
        if self.is_exact() {
            if self.terms.len() == 1 {
                return Ok(QExpansion::monomial(-v, lead_inv));
            }
            return Err(Error::UnboundedInverse);
        }
        let rel_len = self.trunc - v;
        let rest: Vec<(i64, Scalar)> = self
            .terms
            .iter()
            .skip(1)
            .map(|(n, c)| (n - v, c * &lead_inv))
            .collect();
        // b_m = −Σ_{i ≥ 1} â_i b_{m−i} with â = a / (lead·q^v).
        let mut b: BTreeMap<i64, Scalar> = BTreeMap::new();
        b.insert(0, Scalar::one());
        for m in 1..rel_len {
            let mut s = Scalar::zero();
            for (i, ai) in &rest {
                if *i > m {
                    break;
                }
                if let Some(bj) = b.get(&(m - i)) {
                    s -= &(ai * bj);
                }
            }
            if !s.is_zero() {
                b.insert(m, s);
            }
        }
        Ok(QExpansion {
            terms: b
                .into_iter()
                .map(|(m, c)| (m - v, &c * &lead_inv))
                .collect(),
            trunc: self.trunc - 2 * v,
        })
    }

    /// The substitution τ ↦ τ+1: `q^{n/8} ↦ ζ₈ⁿ q^{n/8}`.
    pub fn tau_shift(&self) -> QExpansion {
        QExpansion {
            terms: self
                .terms
                .iter()
                .map(|(n, c)| (*n, c * &Scalar::zeta8_pow(*n)))
                .collect(),
            trunc: self.trunc,
        }
    }

    /// Applies `f` to every coefficient, pruning zeros.
    pub fn map_coeffs(&self, f: impl Fn(&Scalar) -> Scalar) -> QExpansion {
        QExpansion::from_terms(self.terms.iter().map(|(n, c)| (*n, f(c))), self.trunc)
    }

    /// Set of π-degrees appearing in any coefficient.
    pub fn pi_degrees(&self) -> std::collections::BTreeSet<i32> {
        self.terms.values().flat_map(|c| c.pi_degrees()).collect()
    }

    /// True when every exponent is a multiple of `step` eighths.
    pub fn exponents_divisible_by(&self, step: i64) -> bool {
        self.terms.keys().all(|n| n.rem_euclid(step) == 0)
    }

    /// Numerical value at τ with a heuristic bound for the truncated tail.
    ///
    /// The bound is `M·r^t/(1−r)` where `r = |e^{2πiτ/8}|`, `t` the truncation
    /// numerator and `M` the largest known coefficient modulus.
    pub fn eval(&self, tau: Complex64) -> Result<(Complex64, f64)> {
        if tau.im <= 0.0 {
            return Err(Error::Domain(format!("Im(tau) must be positive, got {}", tau.im)));
        }
        let w = (Complex64::new(0.0, 2.0 * std::f64::consts::PI) * tau / DENOM as f64).exp();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut m: f64 = 0.0;
        for (n, c) in &self.terms {
            let z = c.to_complex();
            m = m.max(z.norm());
            sum += z * w.powi(*n as i32);
        }
        let tail = if self.is_exact() {
            0.0
        } else {
            let r = w.norm();
            m.max(1.0) * r.powf(self.trunc as f64) / (1.0 - r)
        };
        Ok((sum, tail))
    }
}

impl Default for QExpansion {
    fn default() -> Self {
        Self::exact_zero()
    }
}

impl<'a> Add<&'a QExpansion> for &'a QExpansion {
    type Output = QExpansion;
    fn add(self, rhs: &QExpansion) -> QExpansion {
        let trunc = self.trunc.min(rhs.trunc);
        let mut terms: BTreeMap<i64, Scalar> = self.terms.range(..trunc).map(|(n, c)| (*n, c.clone())).collect();
        for (n, c) in rhs.terms.range(..trunc) {
            let e = terms.entry(*n).or_default();
            *e += c;
            if e.is_zero() {
                terms.remove(n);
            }
        }
        QExpansion { terms, trunc }
    }
}

impl Neg for &QExpansion {
    type Output = QExpansion;
    fn neg(self) -> QExpansion {
        QExpansion {
            terms: self.terms.iter().map(|(n, c)| (*n, -c)).collect(),
            trunc: self.trunc,
        }
    }
}

impl Neg for QExpansion {
    type Output = QExpansion;
    fn neg(self) -> QExpansion {
        -&self
    }
}

impl<'a> Sub<&'a QExpansion> for &'a QExpansion {
    type Output = QExpansion;
    fn sub(self, rhs: &QExpansion) -> QExpansion {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a QExpansion> for &'a QExpansion {
    type Output = QExpansion;
    fn mul(self, rhs: &QExpansion) -> QExpansion {
        self.mul_to(rhs, EXACT)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QExpansion> for QExpansion {
            type Output = QExpansion;
            fn $m(self, rhs: QExpansion) -> QExpansion {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QExpansion> for QExpansion {
            type Output = QExpansion;
            fn $m(self, rhs: &QExpansion) -> QExpansion {
                (&self).$m(rhs)
            }
        }
        impl $tr<QExpansion> for &QExpansion {
            type Output = QExpansion;
            fn $m(self, rhs: QExpansion) -> QExpansion {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for QExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, c)| {
                let cs = c.to_string();
                let cs = if cs.contains(' ') { format!("({cs})") } else { cs };
                if *n == 0 {
                    cs
                } else {
                    format!("{cs}*q^({n}/8)")
                }
            })
            .collect();
        if parts.is_empty() {
            parts.push("0".into());
        }
        if !self.is_exact() {
            parts.push(format!("O(q^({}/8))", self.trunc));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    num: i64,
    coeff: &'a Scalar,
}

impl Serialize for QExpansion {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("QExpansion", 3)?;
        st.serialize_field("denom", &DENOM)?;
        st.serialize_field("trunc_num", &self.trunc_num())?;
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(n, c)| TermJson { num: *n, coeff: c })
            .collect();
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(t: &[(i64, i64)], trunc: i64) -> QExpansion {
        QExpansion::from_ints(t, trunc)
    }

    #[test]
    fn difference_of_squares() {
        let a = ints(&[(0, 1), (8, 1)], 40);
        let b = ints(&[(0, 1), (8, -1)], 40);
        assert_eq!(&a * &b, ints(&[(0, 1), (16, -1)], 40));
    }

    #[test]
    fn eighth_powers_add() {
        let a = QExpansion::monomial(1, Scalar::one());
        assert_eq!(&a * &a, QExpansion::monomial(2, Scalar::one()));
    }

    #[test]
    fn times_zero_is_zero() {
        let a = ints(&[(4, 1), (8, 3)], 24);
        assert!((&a * &QExpansion::exact_zero()).is_zero());
    }

    #[test]
    fn geometric_series() {
        let a = ints(&[(0, 1), (8, -1)], 40);
        let inv = a.inv().unwrap();
        assert_eq!(inv, ints(&[(0, 1), (8, 1), (16, 1), (24, 1), (32, 1)], 40));
    }

    #[test]
    fn monomial_inverse_is_exact() {
        let a = QExpansion::monomial(1, Scalar::one());
        assert_eq!(a.inv().unwrap(), QExpansion::monomial(-1, Scalar::one()));
    }

    #[test]
    fn inverse_round_trip_with_offset() {
        let a = ints(&[(1, 2), (9, -2)], 49);
        let inv = a.inv().unwrap();
        assert_eq!(inv.valuation(), -1);
        assert_eq!(inv.trunc(), 47);
        let p = &a * &inv;
        assert_eq!(p.trunc(), 48);
        assert_eq!(p, ints(&[(0, 1)], 48));
    }

    #[test]
    fn inverse_errors() {
        let non_unit = QExpansion::constant(Scalar::one() + Scalar::pi_pow(1)).truncate(16);
        assert!(matches!(non_unit.inv(), Err(Error::NonInvertible(_))));
        let exact = ints(&[(0, 1), (8, -1)], EXACT);
        assert_eq!(exact.inv(), Err(Error::UnboundedInverse));
    }

    #[test]
    fn tau_shift_phases() {
        let a = QExpansion::monomial(4, Scalar::one());
        assert_eq!(a.tau_shift(), QExpansion::monomial(4, Scalar::from_int(-1)));
        assert_eq!(QExpansion::one().tau_shift(), QExpansion::one());
        let mut x = ints(&[(1, 3), (2, 1), (5, -7), (12, 2)], 30);
        let orig = x.clone();
        for _ in 0..8 {
            x = x.tau_shift();
        }
        assert_eq!(x, orig);
    }

    #[test]
    fn truncation_propagates() {
        let a = ints(&[(0, 1), (4, 1)], 16);
        let b = ints(&[(8, 1)], 24);
        assert_eq!((&a + &b).trunc(), 16);
        // min(16 + 8, 24 + 0)
        assert_eq!((&a * &b).trunc(), 24);
    }

    #[test]
    fn eval_examples() {
        let i = Complex64::new(0.0, 1.0);
        let (one, tail) = QExpansion::one().eval(i).unwrap();
        assert!((one - 1.0).norm() < 1e-15 && tail == 0.0);
        let (q, _) = QExpansion::monomial(8, Scalar::one()).eval(i).unwrap();
        assert!((q.re - (-2.0 * std::f64::consts::PI).exp()).abs() < 1e-15);
        assert!((q.re - 0.001_867_44).abs() < 1e-8);
        let (qh, _) = QExpansion::monomial(4, Scalar::one()).eval(i).unwrap();
        assert!((qh.re - 0.043_213_9).abs() < 1e-7);
        assert!(QExpansion::one().eval(Complex64::new(0.0, -1.0)).is_err());
    }

    #[test]
    fn json_shape() {
        let a = ints(&[(4, -3)], 16);
        let v = serde_json::to_value(&a).unwrap();
        assert_eq!(v["denom"], 8);
        assert_eq!(v["trunc_num"], 16);
        assert_eq!(v["terms"][0]["num"], 4);
        assert_eq!(v["terms"][0]["coeff"][0]["zeta8"][0], "-3/1");
        let e = serde_json::to_value(QExpansion::one()).unwrap();
        assert!(e["trunc_num"].is_null());
    }
}
