//! The universal truncated characteristic-form ring and the constructions of
//! Φ_L, Φ_W, Φ'_W (and their tilde variants) inside it.
//!
//! Even generators are the Chern-root variables `x_1 … x_n` and the twist
//! variable `u`, each of form degree 2. A y-series is realised on a generator
//! through `y^m ↦ π^m g^m`, so a coefficient of `Π x_j^{e_j} u^f` carries
//! π-degree `Σe_j + f` plus a fixed offset. Odd generators are
//!
//! * `a_k` (degree `4k+3`): stands for `π^{2k+2}·tr[A(R/4π²)^{2k+1}]`;
//! * `b` (degree 1): stands for `π√−1·tr[BJ]` on the rank-2 twist bundle.
//!
//! At most one odd factor survives in any product.

mod bundle_route;
mod theta_route;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

pub use bundle_route::{phi_bundle_route, phi_tilde_bundle_route};
pub use theta_route::{phi_theta_route, phi_tilde_route, tilde_u_factor, u_factor};

use crate::error::{Error, Result};
use crate::qseries::QExpansion;
use crate::scalars::Scalar;
use crate::theta::YSeries;

/// An odd trace generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OddGen {
    /// `a_k`, degree `4k+3`.
    A(u32),
    /// `b`, degree 1.
    B,
}

impl OddGen {
    pub fn degree(self) -> u32 {
        match self {
            OddGen::A(k) => 4 * k + 3,
            OddGen::B => 1,
        }
    }

    pub fn label(self) -> String {
        match self {
            OddGen::A(k) => format!("a{k}"),
            OddGen::B => "b".to_string(),
        }
    }
}

impl fmt::Display for OddGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// An even generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    X(usize),
    U,
}

/// Shape of the ring: generators, degree cap and q-order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSpec {
    pub n_roots: usize,
    pub has_xi: bool,
    pub odd_gens: Vec<OddGen>,
    /// Form-degree cap (the manifold dimension).
    pub d: u32,
    /// Coefficients are truncated below `q^{q_order}`.
    pub q_order: i64,
}

impl RingSpec {
    /// `4k−1` manifold with the tangent-trace generators `a_j`, `4j+3 ≤ 4k−1`.
    pub fn tm(k: u32, q_order: i64) -> RingSpec {
        let d = 4 * k - 1;
        RingSpec {
            n_roots: (2 * k - 1) as usize,
            has_xi: true,
            odd_gens: (0..k).map(OddGen::A).collect(),
            d,
            q_order,
        }
    }

    /// `4k−1` manifold with the twist-trace generator `b`.
    pub fn xi(k: u32, q_order: i64) -> RingSpec {
        RingSpec {
            n_roots: (2 * k - 1) as usize,
            has_xi: true,
            odd_gens: vec![OddGen::B],
            d: 4 * k - 1,
            q_order,
        }
    }

    /// `4k+1` manifold with the tangent-trace generators `a_j`, `4j+3 ≤ 4k+1`.
    pub fn tilde(k: u32, q_order: i64) -> RingSpec {
        let d = 4 * k + 1;
        RingSpec {
            n_roots: (2 * k) as usize,
            has_xi: true,
            odd_gens: (0..).map(OddGen::A).take_while(|g| g.degree() <= d).collect(),
            d,
            q_order,
        }
    }

    /// Same generators with the degree cap raised by `extra`.
    pub fn widened(&self, extra: u32) -> RingSpec {
        RingSpec {
            d: self.d + extra,
            ..self.clone()
        }
    }

    /// Same generators at a different q-order.
    pub fn with_q_order(&self, q_order: i64) -> RingSpec {
        RingSpec {
            q_order,
            ..self.clone()
        }
    }

    pub fn q_cap(&self) -> i64 {
        8 * self.q_order
    }

    /// Largest y-degree that survives substitution into an even generator.
    pub fn max_even_power(&self) -> i64 {
        (self.d / 2) as i64
    }

    /// Dimension parity: number of zero Chern roots of the tangent bundle.
    pub fn zero_roots(&self) -> u32 {
        self.d - 2 * self.n_roots as u32
    }
}

/// `Π x_j^{x[j]} · u^u · odd`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Vec<u8>,
    pub u: u8,
    pub odd: Option<OddGen>,
}

impl Monomial {
    pub fn one(n_roots: usize) -> Monomial {
        Monomial {
            x: vec![0; n_roots],
            u: 0,
            odd: None,
        }
    }

    /// Number of even factors (half the even form degree).
    pub fn even_count(&self) -> u32 {
        self.x.iter().map(|&e| e as u32).sum::<u32>() + self.u as u32
    }

    pub fn degree(&self) -> u32 {
        2 * self.even_count() + self.odd.map_or(0, OddGen::degree)
    }

    fn mul(&self, other: &Monomial) -> Option<Monomial> {
        let odd = match (self.odd, other.odd) {
            (Some(_), Some(_)) => return None,
            (a, b) => a.or(b),
        };
        Some(Monomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            u: self.u + other.u,
            odd,
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, &e) in self.x.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", j + 1)),
                e => parts.push(format!("x{}^{e}", j + 1)),
            }
        }
        match self.u {
            0 => {}
            1 => parts.push("u".into()),
            e => parts.push(format!("u^{e}")),
        }
        if let Some(o) = self.odd {
            parts.push(o.label());
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// An element of the truncated ring with q-series coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct FormElement {
    spec: Arc<RingSpec>,
    terms: BTreeMap<Monomial, QExpansion>,
}

impl FormElement {
    pub fn zero(spec: &Arc<RingSpec>) -> Self {
        FormElement {
            spec: spec.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(spec: &Arc<RingSpec>, c: QExpansion) -> Self {
        Self::from_terms(spec, [(Monomial::one(spec.n_roots), c)])
    }

    pub fn one(spec: &Arc<RingSpec>) -> Self {
        Self::constant(spec, QExpansion::one())
    }

    /// Builds an element, dropping monomials above the degree cap, exact
    /// zeros and unknown generators, and capping coefficient q-truncation.
    pub fn from_terms(spec: &Arc<RingSpec>, terms: impl IntoIterator<Item = (Monomial, QExpansion)>) -> Self {
        let cap = spec.q_cap();
        let mut map: BTreeMap<Monomial, QExpansion> = BTreeMap::new();
        for (m, c) in terms {
            if m.degree() > spec.d || m.x.len() != spec.n_roots {
                continue;
            }
            if let Some(o) = m.odd {
                if !spec.odd_gens.contains(&o) {
                    continue;
                }
            }
            let c = c.truncate(cap);
            match map.get_mut(&m) {
                Some(e) => *e = &*e + &c,
                None => {
                    map.insert(m, c);
                }
            }
        }
        map.retain(|_, c| !(c.is_zero() && c.is_exact()));
        FormElement {
            spec: spec.clone(),
            terms: map,
        }
    }

    /// The odd generator itself, with coefficient 1.
    pub fn odd_generator(spec: &Arc<RingSpec>, g: OddGen) -> Result<Self> {
        if !spec.odd_gens.contains(&g) {
            return Err(Error::InvalidArgument(format!("{g} is not a generator of this ring")));
        }
        let mut m = Monomial::one(spec.n_roots);
        m.odd = Some(g);
        Ok(Self::from_terms(spec, [(m, QExpansion::one())]))
    }

    /// The even generator `g` with coefficient `π` (the image of `y`).
    pub fn even_generator(spec: &Arc<RingSpec>, g: Gen) -> Result<Self> {
        substitute(spec, &YSeries::monomial(1, Scalar::one(), y_order_for(spec)), g)
    }

    pub fn spec(&self) -> &Arc<RingSpec> {
        &self.spec
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, QExpansion> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> QExpansion {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(QExpansion::is_zero)
    }

    /// Smallest coefficient truncation.
    pub fn q_trunc(&self) -> i64 {
        self.terms
            .values()
            .map(QExpansion::trunc)
            .min()
            .unwrap_or(crate::qseries::EXACT)
    }

    fn check_spec(&self, other: &FormElement) -> Result<()> {
        if self.spec == other.spec || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn add(&self, other: &FormElement) -> Result<FormElement> {
        self.check_spec(other)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(e) => *e = &*e + c,
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Ok(Self::from_terms(&self.spec, terms))
    }

    pub fn sub(&self, other: &FormElement) -> Result<FormElement> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormElement {
        FormElement {
            spec: self.spec.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    /// Graded product: degrees above the cap and odd·odd vanish.
    pub fn mul(&self, other: &FormElement) -> Result<FormElement> {
        self.check_spec(other)?;
        let cap = self.spec.q_cap();
        let d = self.spec.d;
        let mut acc: HashMap<Monomial, QExpansion> = HashMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            for (mb, cb) in &other.terms {
                if da + mb.degree() > d {
                    continue;
                }
                let Some(m) = ma.mul(mb) else { continue };
                let p = ca.mul_to(cb, cap);
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        Ok(Self::from_terms(&self.spec, acc))
    }

    pub fn scale(&self, s: &Scalar) -> FormElement {
        Self::from_terms(&self.spec, self.terms.iter().map(|(m, c)| (m.clone(), c.scale(s))))
    }

    pub fn scale_q(&self, f: &QExpansion) -> FormElement {
        let cap = self.spec.q_cap();
        Self::from_terms(&self.spec, self.terms.iter().map(|(m, c)| (m.clone(), c.mul_to(f, cap))))
    }

    /// Inverse of an element whose degree-0 part is an invertible q-series.
    pub fn inv(&self) -> Result<FormElement> {
        let unit = Monomial::one(self.spec.n_roots);
        let c0 = self.coeff(&unit);
        let c0_inv = c0.truncate(self.spec.q_cap()).inv()?;
        let mut nil = self.clone();
        nil.terms.remove(&unit);
        let step = nil.scale_q(&c0_inv).neg();
        // c0⁻¹·Σ (−n/c0)^j, finite since n is nilpotent
        let mut acc = FormElement::one(&self.spec);
        let mut power = FormElement::one(&self.spec);
        loop {
            power = power.mul(&step)?;
            if power.is_empty() {
                break;
            }
            acc = acc.add(&power)?;
        }
        Ok(acc.scale_q(&c0_inv))
    }

    /// Divides by an even generator; every monomial must contain it.
    pub fn div_by_generator(&self, g: Gen) -> Result<FormElement> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            let e = match g {
                Gen::X(j) => &mut m2.x[j],
                Gen::U => &mut m2.u,
            };
            if *e == 0 {
                if c.is_zero() {
                    continue;
                }
                return Err(Error::PoleNotCancelled(format!("monomial {m} is not divisible by the generator")));
            }
            *e -= 1;
            terms.push((m2, c.clone()));
        }
        Ok(Self::from_terms(&self.spec, terms))
    }

    /// Re-homes the element in `spec` (same generators), dropping monomials
    /// above its degree cap.
    pub fn restrict_to(&self, spec: &Arc<RingSpec>) -> Result<FormElement> {
        if spec.n_roots != self.spec.n_roots || spec.odd_gens != self.spec.odd_gens {
            return Err(Error::SpecMismatch);
        }
        Ok(Self::from_terms(spec, self.terms.clone()))
    }

    /// Monomials of form degree exactly `d`.
    pub fn degree_component(&self, d: u32) -> FormElement {
        FormElement {
            spec: self.spec.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The top-degree component.
    pub fn top_component(&self) -> FormElement {
        self.degree_component(self.spec.d)
    }

    /// Common value of `π-degree − even_count` over all coefficients.
    ///
    /// `Ok(None)` for the zero element; an error when two values occur.
    pub fn pi_offset(&self) -> Result<Option<i32>> {
        let mut offset: Option<i32> = None;
        for (m, c) in &self.terms {
            for d in c.pi_degrees() {
                let o = d - m.even_count() as i32;
                match offset {
                    None => offset = Some(o),
                    Some(p) if p == o => {}
                    Some(p) => {
                        return Err(Error::Inhomogeneous(format!(
                            "monomial {m} has offset {o}, expected {p}"
                        )))
                    }
                }
            }
        }
        Ok(offset)
    }

    /// Relabels `x_j ↦ x_{perm[j]}`.
    pub fn permute_x(&self, perm: &[usize]) -> Result<FormElement> {
        let n = self.spec.n_roots;
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation of the root labels".into()));
        }
        Ok(Self::from_terms(
            &self.spec,
            self.terms.iter().map(|(m, c)| {
                let mut x = vec![0; n];
                for (j, &e) in m.x.iter().enumerate() {
                    x[perm[j]] = e;
                }
                (Monomial { x, ..m.clone() }, c.clone())
            }),
        ))
    }

    /// τ ↦ τ+1 on every coefficient.
    pub fn tau_shift(&self) -> FormElement {
        self.map_coeffs(QExpansion::tau_shift)
    }

    pub fn truncate_q(&self, t: i64) -> FormElement {
        self.map_coeffs(|c| c.truncate(t))
    }

    pub fn map_coeffs(&self, f: impl Fn(&QExpansion) -> QExpansion) -> FormElement {
        Self::from_terms(&self.spec, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    /// True when `self − other` vanishes to the common truncation.
    pub fn agrees_with(&self, other: &FormElement) -> Result<bool> {
        Ok(self.sub(other)?.is_zero())
    }

    /// True when every monomial carries exactly one odd generator.
    pub fn is_odd_linear(&self) -> bool {
        self.terms.keys().all(|m| m.odd.is_some())
    }

    /// True when no monomial carries an odd generator.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|m| m.odd.is_none())
    }
}

/// Realises a y-series on an even generator: `y^m ↦ π^m g^m`.
pub fn substitute(spec: &Arc<RingSpec>, s: &YSeries, g: Gen) -> Result<FormElement> {
    let v = s.valuation();
    if v < 0 {
        return Err(Error::NegativeValuation(v));
    }
    if let Gen::X(j) = g {
        if j >= spec.n_roots {
            return Err(Error::InvalidArgument(format!("root index {j} out of range")));
        }
    }
    let max = spec.max_even_power();
    if s.y_trunc() <= max {
        return Err(Error::InsufficientOrder(format!(
            "y-series known below y^{} but degree cap needs y^{max}",
            s.y_trunc()
        )));
    }
    let terms = s.iter().filter(|(m, _)| *m >= 0 && *m <= max).map(|(m, c)| {
        let mut mono = Monomial::one(spec.n_roots);
        match g {
            Gen::X(j) => mono.x[j] = m as u8,
            Gen::U => mono.u = m as u8,
        }
        (mono, c.shift_pi(m as i32))
    });
    Ok(FormElement::from_terms(spec, terms))
}

/// `y_order` needed so that substitution reaches the degree cap.
pub fn y_order_for(spec: &RingSpec) -> i64 {
    spec.max_even_power() + 1
}

impl fmt::Display for FormElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{m}] {c}")?;
        }
        Ok(())
    }
}

struct MonomialJson<'a>(&'a Monomial);

impl Serialize for MonomialJson<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = serializer.serialize_map(Some(3))?;
        m.serialize_entry("X", &self.0.x)?;
        m.serialize_entry("U", &self.0.u)?;
        m.serialize_entry("odd", &self.0.odd.map(OddGen::label))?;
        m.end()
    }
}

#[derive(Serialize)]
struct TermJson<'a> {
    monomial: MonomialJson<'a>,
    coeff: &'a QExpansion,
}

impl Serialize for FormElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.terms.iter().map(|(m, c)| TermJson {
            monomial: MonomialJson(m),
            coeff: c,
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn spec(k: u32) -> Arc<RingSpec> {
        Arc::new(RingSpec::tm(k, 2))
    }

    fn x1(s: &Arc<RingSpec>) -> FormElement {
        FormElement::even_generator(s, Gen::X(0)).unwrap()
    }

    #[test]
    fn degree_cap_kills_high_powers() {
        let s = spec(3);
        let x = x1(&s);
        let mut p = FormElement::one(&s);
        for _ in 0..6 {
            p = p.mul(&x).unwrap();
        }
        assert!(p.is_empty());
    }

    #[test]
    fn odd_times_odd_vanishes() {
        let s = Arc::new(RingSpec {
            odd_gens: vec![OddGen::A(0), OddGen::B],
            ..RingSpec::tm(3, 2)
        });
        let a = FormElement::odd_generator(&s, OddGen::A(0)).unwrap();
        let b = FormElement::odd_generator(&s, OddGen::B).unwrap();
        assert!(a.mul(&b).unwrap().is_empty());
    }

    #[test]
    fn difference_of_squares() {
        let s = spec(3);
        let one = FormElement::one(&s);
        let x = x1(&s);
        let lhs = one.add(&x).unwrap().mul(&one.sub(&x).unwrap()).unwrap();
        let rhs = one.sub(&x.mul(&x).unwrap()).unwrap();
        assert!(lhs.agrees_with(&rhs).unwrap());
    }

    #[test]
    fn substitute_at_low_degree() {
        // x^4 has degree 8 and falls outside a 7-dimensional ring.
        let s = Arc::new(RingSpec::tm(2, 1));
        let f = crate::theta::f_quotient(crate::theta::PhiFamily::L, 6, 1).unwrap();
        let e = substitute(&s, &f, Gen::X(0)).unwrap();
        assert_eq!(e.len(), 2);
        assert!(substitute(&s, &YSeries::one(6), Gen::U).unwrap() == FormElement::one(&s));
    }

    #[test]
    fn cosh_half_euler_is_cos_u() {
        // cosh(c/2) with c/2 = π√−1u, built from exponentials of iy.
        let s = spec(3);
        let yt = 8;
        let e_plus = YSeries::exp(&Scalar::i(), yt);
        let e_minus = YSeries::exp(&-Scalar::i(), yt);
        let cosh = (&e_plus + &e_minus).scale(&Scalar::from_ratio(1, 2));
        let cos = YSeries::cos(&BigRational::from_integer(1.into()), yt);
        assert_eq!(
            substitute(&s, &cosh, Gen::U).unwrap(),
            substitute(&s, &cos, Gen::U).unwrap()
        );
    }

    #[test]
    fn inverse_round_trip() {
        let s = spec(2);
        let x = x1(&s);
        let u = FormElement::even_generator(&s, Gen::U).unwrap();
        let e = FormElement::constant(&s, QExpansion::from_ints(&[(0, 2), (8, 1)], 16))
            .add(&x)
            .unwrap()
            .add(&u.mul(&x).unwrap())
            .unwrap();
        let p = e.mul(&e.inv().unwrap()).unwrap();
        assert!(p.agrees_with(&FormElement::one(&s)).unwrap());
    }

    #[test]
    fn pi_audit_detects_mixing() {
        let s = spec(2);
        let x = x1(&s);
        assert_eq!(x.pi_offset().unwrap(), Some(0));
        let bad = x.add(&FormElement::one(&s).scale(&Scalar::pi_pow(1))).unwrap();
        assert!(matches!(bad.pi_offset(), Err(Error::Inhomogeneous(_))));
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let a = FormElement::one(&spec(2));
        let b = FormElement::one(&spec(3));
        assert_eq!(a.mul(&b), Err(Error::SpecMismatch));
    }

    #[test]
    fn negative_valuation_rejected() {
        let s = spec(1);
        let lap = YSeries::monomial(-1, Scalar::one(), 4);
        assert_eq!(substitute(&s, &lap, Gen::U), Err(Error::NegativeValuation(-1)));
    }

    fn routes_agree(spec: RingSpec, tilde: bool) {
        let s = Arc::new(spec);
        for fam in crate::theta::PhiFamily::ALL {
            let (a, b) = if tilde {
                (phi_tilde_route(fam, &s).unwrap(), phi_tilde_bundle_route(fam, &s).unwrap())
            } else {
                (phi_theta_route(fam, &s).unwrap(), phi_bundle_route(fam, &s).unwrap())
            };
            assert!(a.agrees_with(&b).unwrap(), "{fam:?}\n{a}\n---\n{b}");
        }
    }

    #[test]
    fn theta_and_bundle_routes_agree_in_dim_3() {
        routes_agree(RingSpec::tm(1, 2), false);
    }

    #[test]
    fn theta_and_bundle_routes_agree_in_dim_7() {
        routes_agree(RingSpec::xi(2, 2), false);
    }

    #[test]
    fn tilde_routes_agree_in_dim_5() {
        routes_agree(RingSpec::tilde(1, 1), true);
    }

    #[test]
    fn tilde_routes_agree_in_dim_9() {
        routes_agree(RingSpec::tilde(2, 1), true);
    }
}
