//! Exact coefficients: rationals extended by the primitive 8th root of unity
//! ζ₈ = e^{iπ/4}, graded by integer powers of a formal π.
//!
//! [`CycloRational`] is an element of ℚ(ζ₈) stored over the basis
//! {1, ζ₈, ζ₈², ζ₈³} with ζ₈⁴ = −1. [`Scalar`] is a finite sum Σ c_d·π^d with
//! `c_d` cyclotomic; π never gets a numerical value inside the exact kernel.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

/// An element of ℚ(ζ₈).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRational {
    coeffs: [BigRational; 4],
}

impl CycloRational {
    pub fn new(coeffs: [BigRational; 4]) -> Self {
        CycloRational { coeffs }
    }

    pub fn zero() -> Self {
        CycloRational {
            coeffs: [
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
                BigRational::zero(),
            ],
        }
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut c = Self::zero();
        c.coeffs[0] = r;
        c
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// ζ₈^k for any integer k.
    pub fn zeta8_pow(k: i64) -> Self {
        let k = k.rem_euclid(8) as usize;
        let mut c = Self::zero();
        if k < 4 {
            c.coeffs[k] = BigRational::one();
        } else {
            c.coeffs[k - 4] = -BigRational::one();
        }
        c
    }

    /// √−1 = ζ₈².
    pub fn i() -> Self {
        Self::zeta8_pow(2)
    }

    /// √2 = ζ₈ − ζ₈³.
    pub fn sqrt2() -> Self {
        let mut c = Self::zero();
        c.coeffs[1] = BigRational::one();
        c.coeffs[3] = -BigRational::one();
        c
    }

    pub fn coeffs(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, when the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycloRational {
            coeffs: [
                &self.coeffs[0] * r,
                &self.coeffs[1] * r,
                &self.coeffs[2] * r,
                &self.coeffs[3] * r,
            ],
        }
    }

    /// Galois automorphism ζ₈ ↦ ζ₈^k (k odd).
    pub fn galois(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (i as i64 * k).rem_euclid(8) as usize;
            if e < 4 {
                out.coeffs[e] += c;
            } else {
                out.coeffs[e - 4] -= c;
            }
        }
        out
    }

    /// Field norm down to ℚ.
    pub fn norm(&self) -> BigRational {
        let n = self * &self.galois(3) * self.galois(5) * self.galois(7);
        debug_assert!(n.as_rational().is_some());
        n.coeffs[0].clone()
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_rational(r.recip()));
        }
        let conj = self.galois(3) * self.galois(5) * self.galois(7);
        let n = self.norm();
        Some(conj.scale(&n.recip()))
    }

    pub fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = std::f64::consts::FRAC_PI_4 * k as f64;
            z += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle);
        }
        z
    }

    /// Components as "p/q" strings in the order 1, ζ₈, ζ₈², ζ₈³.
    pub fn component_strings(&self) -> [String; 4] {
        [0, 1, 2, 3].map(|i| rational_string(&self.coeffs[i]))
    }
}

fn rational_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

impl Default for CycloRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn add(self, rhs: &CycloRational) -> CycloRational {
        CycloRational {
            coeffs: [
                &self.coeffs[0] + &rhs.coeffs[0],
                &self.coeffs[1] + &rhs.coeffs[1],
                &self.coeffs[2] + &rhs.coeffs[2],
                &self.coeffs[3] + &rhs.coeffs[3],
            ],
        }
    }
}

impl AddAssign<&CycloRational> for CycloRational {
    fn add_assign(&mut self, rhs: &CycloRational) {
        for (a, b) in self.coeffs.iter_mut().zip(rhs.coeffs.iter()) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }
}

impl Neg for &CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational {
            coeffs: [
                -&self.coeffs[0],
                -&self.coeffs[1],
                -&self.coeffs[2],
                -&self.coeffs[3],
            ],
        }
    }
}

impl<'a> Sub<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn sub(self, rhs: &CycloRational) -> CycloRational {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn mul(self, rhs: &CycloRational) -> CycloRational {
        let mut out = CycloRational::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                let e = i + j;
                if e < 4 {
                    out.coeffs[e] += p;
                } else {
                    out.coeffs[e - 4] -= p;
                }
            }
        }
        out
    }
}

impl Mul<CycloRational> for CycloRational {
    type Output = CycloRational;
    fn mul(self, rhs: CycloRational) -> CycloRational {
        &self * &rhs
    }
}

impl Mul<CycloRational> for &CycloRational {
    type Output = CycloRational;
    fn mul(self, rhs: CycloRational) -> CycloRational {
        self * &rhs
    }
}

impl fmt::Display for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "z8", "z8^2", "z8^3"];
        let mut parts = Vec::new();
        for (c, name) in self.coeffs.iter().zip(names) {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = if name.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                name.to_string()
            } else {
                format!("{mag}*{name}")
            };
            parts.push((sign, body));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (k, (sign, body)) in parts.into_iter().enumerate() {
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(if sign == "-" { " - " } else { " + " });
            }
            s.push_str(&body);
        }
        write!(f, "{s}")
    }
}

/// A finite π-graded sum Σ_d c_d·π^d with c_d ∈ ℚ(ζ₈).
///
/// Terms are kept sorted by π-degree with no zero coefficients, so derived
/// equality is equality of canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(i32, CycloRational)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_cyclo(CycloRational::one(), 0)
    }

    /// c·π^d.
    pub fn from_cyclo(c: CycloRational, pi_degree: i32) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Scalar {
                terms: vec![(pi_degree, c)],
            }
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::from_cyclo(CycloRational::from_rational(r), 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_cyclo(CycloRational::from_int(n), 0)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_cyclo(CycloRational::from_ratio(num, den), 0)
    }

    /// π^d.
    pub fn pi_pow(d: i32) -> Self {
        Self::from_cyclo(CycloRational::one(), d)
    }

    pub fn zeta8_pow(k: i64) -> Self {
        Self::from_cyclo(CycloRational::zeta8_pow(k), 0)
    }

    pub fn i() -> Self {
        Self::zeta8_pow(2)
    }

    pub fn sqrt2() -> Self {
        Self::from_cyclo(CycloRational::sqrt2(), 0)
    }

    /// Builds from arbitrary (degree, coefficient) pairs, merging and pruning.
    pub fn from_terms(terms: impl IntoIterator<Item = (i32, CycloRational)>) -> Self {
        let mut v: Vec<(i32, CycloRational)> = terms.into_iter().collect();
        v.sort_by_key(|(d, _)| *d);
        let mut out: Vec<(i32, CycloRational)> = Vec::with_capacity(v.len());
        for (d, c) in v {
            match out.last_mut() {
                Some((ld, lc)) if *ld == d => *lc += &c,
                _ => out.push((d, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Scalar { terms: out }
    }

    pub fn terms(&self) -> &[(i32, CycloRational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    /// The single (π-degree, coefficient) pair of a monomial scalar.
    pub fn as_monomial(&self) -> Option<(i32, &CycloRational)> {
        match self.terms.as_slice() {
            [(d, c)] => Some((*d, c)),
            _ => None,
        }
    }

    /// The rational value of a π⁰ rational scalar (zero included).
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(0, c)] => c.as_rational().cloned(),
            _ => None,
        }
    }

    pub fn pi_degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.terms.iter().map(|(d, _)| *d)
    }

    /// Multiplies by π^d.
    pub fn shift_pi(&self, d: i32) -> Self {
        Scalar {
            terms: self.terms.iter().map(|(e, c)| (e + d, c.clone())).collect(),
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Scalar {
            terms: self.terms.iter().map(|(d, c)| (*d, c.scale(r))).collect(),
        }
    }

    /// Inverse of a monomial scalar; sums of several π-degrees are not units.
    pub fn inv(&self) -> Option<Self> {
        let (d, c) = self.as_monomial()?;
        Some(Self::from_cyclo(c.inv()?, -d))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes ζ₈ ↦ e^{iπ/4} and π ↦ 3.14159….
    pub fn to_complex(&self) -> Complex64 {
        self.terms
            .iter()
            .map(|(d, c)| c.to_complex() * std::f64::consts::PI.powi(*d))
            .sum()
    }

    /// Applies ζ₈ ↦ ζ₈^k to every coefficient.
    pub fn galois(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(d, c)| (*d, c.galois(k))))
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = Vec::with_capacity(self.terms.len() + rhs.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < rhs.terms.len() {
            match (self.terms.get(i), rhs.terms.get(j)) {
                (Some((da, ca)), Some((db, cb))) if da == db => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((*da, s));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((da, ca)), Some((db, _))) if da < db => {
                    out.push((*da, ca.clone()));
                    i += 1;
                }
                (Some(_), Some((db, cb))) => {
                    out.push((*db, cb.clone()));
                    j += 1;
                }
                (Some((da, ca)), None) => {
                    out.push((*da, ca.clone()));
                    i += 1;
                }
                (None, Some((db, cb))) => {
                    out.push((*db, cb.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Scalar { terms: out }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if rhs.is_zero() {
            return;
        }
        // Common case: both sides sit at the same single π-degree.
        if let ([(da, ca)], [(db, cb)]) = (self.terms.as_mut_slice(), rhs.terms.as_slice()) {
            if da == db {
                *ca += cb;
                if ca.is_zero() {
                    self.terms.clear();
                }
                return;
            }
        }
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self += &(-rhs);
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self.terms.as_slice(), rhs.terms.as_slice()) {
            ([], _) | (_, []) => Scalar::zero(),
            ([(da, ca)], [(db, cb)]) => Scalar::from_cyclo(ca * cb, da + db),
            (a, b) => Scalar::from_terms(
                a.iter()
                    .flat_map(|(da, ca)| b.iter().map(move |(db, cb)| (da + db, ca * cb))),
            ),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(d, c)| {
                let cs = c.to_string();
                let needs_paren = cs.contains(' ');
                match (*d, needs_paren) {
                    (0, _) => cs,
                    (d, true) => format!("({cs})*pi^{d}"),
                    (1, false) if c.is_one() => "pi".to_string(),
                    (d, false) if c.is_one() => format!("pi^{d}"),
                    (1, false) => format!("{cs}*pi"),
                    (d, false) => format!("{cs}*pi^{d}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[derive(Serialize)]
struct ScalarTermJson {
    pi_degree: i32,
    zeta8: [String; 4],
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (d, c) in &self.terms {
            seq.serialize_element(&ScalarTermJson {
                pi_degree: *d,
                zeta8: c.component_strings(),
            })?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(n, d)
    }

    #[test]
    fn additive_inverse_prunes_to_empty() {
        let s = Scalar::one() + Scalar::from_int(-1);
        assert!(s.is_zero());
        assert!(s.terms().is_empty());
    }

    #[test]
    fn rational_addition_at_pi_squared() {
        let a = q(1, 2).shift_pi(2);
        let b = q(1, 3).shift_pi(2);
        assert_eq!(a + b, q(5, 6).shift_pi(2));
    }

    #[test]
    fn basis_addition() {
        let s = Scalar::zeta8_pow(1) + Scalar::zeta8_pow(3);
        let (d, c) = s.as_monomial().unwrap();
        assert_eq!(d, 0);
        assert_eq!(c.component_strings(), ["0/1", "1/1", "0/1", "1/1"]);
    }

    #[test]
    fn zeta_products_reduce() {
        assert_eq!(Scalar::zeta8_pow(1) * Scalar::zeta8_pow(3), Scalar::from_int(-1));
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
        assert_eq!(Scalar::sqrt2() * Scalar::sqrt2(), Scalar::from_int(2));
    }

    #[test]
    fn pi_degrees_cancel() {
        let a = Scalar::from_int(2).shift_pi(1);
        let b = Scalar::from_int(3).shift_pi(-1);
        assert_eq!(a * b, Scalar::from_int(6));
    }

    #[test]
    fn complex_images() {
        assert!((Scalar::one().to_complex() - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((Scalar::i().to_complex() - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        let half_pi2 = q(1, 2).shift_pi(2).to_complex();
        let expected = std::f64::consts::PI * std::f64::consts::PI / 2.0;
        assert!((half_pi2.re - expected).abs() < 1e-12);
        assert!(half_pi2.im.abs() < 1e-15);
        assert!((expected - 4.934_802_2).abs() < 1e-7);
    }

    #[test]
    fn cyclotomic_inverse() {
        let a = &CycloRational::from_int(3) + &CycloRational::zeta8_pow(1);
        let a = &a + &CycloRational::zeta8_pow(2).scale(&BigRational::new(2.into(), 5.into()));
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert!(CycloRational::zero().inv().is_none());
    }

    #[test]
    fn non_monomial_scalar_has_no_inverse() {
        let s = Scalar::one() + Scalar::pi_pow(1);
        assert!(s.inv().is_none());
        let m = Scalar::sqrt2().shift_pi(-2);
        assert_eq!(&m * &m.inv().unwrap(), Scalar::one());
    }

    #[test]
    fn json_shape() {
        let s = q(-3, 4).shift_pi(2);
        let v = serde_json::to_value(&s).unwrap();
        assert_eq!(
            v,
            serde_json::json!([{"pi_degree": 2, "zeta8": ["-3/4", "0/1", "0/1", "0/1"]}])
        );
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(q(1, 4).to_string(), "1/4");
        assert_eq!(Scalar::pi_pow(1).to_string(), "pi");
        assert_eq!(Scalar::sqrt2().to_string(), "z8 - z8^3");
        assert_eq!((Scalar::sqrt2() * Scalar::pi_pow(-2)).to_string(), "(z8 - z8^3)*pi^-2");
    }
}
