//! Chern–Simons transgressed integrands of the Φ families.
//!
//! The integral over the deformation parameter is never taken: every identity
//! checked here holds pointwise in `t`, so one universal set of odd generators
//! stands for the traces at `∇_t`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::charring::{
    phi_theta_route, phi_tilde_route, substitute, y_order_for, FormElement, Gen, OddGen, RingSpec,
};
use crate::error::{Error, Result};
use crate::qseries::QExpansion;
use crate::scalars::Scalar;
use crate::theta::{logderiv_combo, ComboKind, PhiFamily, YSeries};

/// Which connection is deformed and which Φ variant is transgressed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CsVariant {
    /// Deform the tangent connection; `4k−1` manifolds.
    Tm,
    /// Deform the connection on the rank-2 bundle ξ; `4k−1` manifolds.
    Xi,
    /// Deform the tangent connection in the Φ̃ family; `4k+1` manifolds.
    Tilde,
}

impl CsVariant {
    pub const ALL: [CsVariant; 3] = [CsVariant::Tm, CsVariant::Xi, CsVariant::Tilde];

    pub fn name(self) -> &'static str {
        match self {
            CsVariant::Tm => "tm",
            CsVariant::Xi => "xi",
            CsVariant::Tilde => "tilde",
        }
    }

    /// The ring for this variant at parameter `k`.
    pub fn spec(self, k: u32, q_order: i64) -> RingSpec {
        match self {
            CsVariant::Tm => RingSpec::tm(k, q_order),
            CsVariant::Xi => RingSpec::xi(k, q_order),
            CsVariant::Tilde => RingSpec::tilde(k, q_order),
        }
    }

    /// Weight of the top component as a modular form.
    pub fn weight(self, k: u32) -> i64 {
        match self {
            CsVariant::Tilde => 2 * k as i64 + 2,
            _ => 2 * k as i64,
        }
    }
}

impl FromStr for CsVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tm" => Ok(CsVariant::Tm),
            "xi" => Ok(CsVariant::Xi),
            "tilde" => Ok(CsVariant::Tilde),
            _ => Err(Error::InvalidArgument(format!("unknown transgression variant {s:?}"))),
        }
    }
}

/// One of the nine transgressed families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CsKind {
    pub variant: CsVariant,
    pub family: PhiFamily,
}

impl fmt::Display for CsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fam = match (self.variant, self.family) {
            (CsVariant::Tilde, PhiFamily::L) => "CSPhiTilde_L",
            (CsVariant::Tilde, PhiFamily::W) => "CSPhiTilde_W",
            (CsVariant::Tilde, PhiFamily::WPrime) => "CSPhiTilde_W'",
            (_, PhiFamily::L) => "CSPhi_L",
            (_, PhiFamily::W) => "CSPhi_W",
            (_, PhiFamily::WPrime) => "CSPhi_W'",
        };
        match self.variant {
            CsVariant::Xi => write!(f, "{fam}[xi]"),
            _ => f.write_str(fam),
        }
    }
}

/// A transgressed integrand: every monomial carries exactly one odd
/// generator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CSForm {
    pub element: FormElement,
    pub kind: CsKind,
    pub top_degree: u32,
}

impl CSForm {
    /// Restriction to monomials of form degree exactly `D`.
    pub fn top_component(&self) -> FormElement {
        self.element.degree_component(self.top_degree)
    }

    /// `CS(τ+1)` as a form of the T-image family.
    pub fn tau_shift(&self) -> CSForm {
        CSForm {
            element: self.element.tau_shift(),
            kind: CsKind {
                variant: self.kind.variant,
                family: self.kind.family.t_image(),
            },
            top_degree: self.top_degree,
        }
    }
}

/// `1/(8π²)`, times `√2` for the L family.
pub fn cs_prefactor(family: PhiFamily) -> Scalar {
    let base = Scalar::from_ratio(1, 8).shift_pi(-2);
    match family {
        PhiFamily::L => &base * &Scalar::sqrt2(),
        _ => base,
    }
}

/// The π-free odd coefficients `ĝ_k` of a combo: `y^{2k+1}` coefficient over π.
pub fn normalized_odd_coeffs(combo: &YSeries, max_k: u32) -> Vec<QExpansion> {
    (0..=max_k as i64)
        .map(|k| combo.coeff(2 * k + 1).shift_pi(-1))
        .collect()
}

/// `Σ_k ĝ_k·a_k`, the universal image of `tr[A·g(R/4π²)]` for the tangent
/// combo of `family`.
pub fn tangent_trace(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    let max_k = spec
        .odd_gens
        .iter()
        .filter_map(|g| match g {
            OddGen::A(k) => Some(*k),
            OddGen::B => None,
        })
        .max()
        .ok_or_else(|| Error::InvalidArgument("ring has no tangent trace generators".into()))?;
    let yo = 2 * max_k as i64 + 2;
    let combo = logderiv_combo(ComboKind::Tangent, family, yo, spec.q_order)?;
    let mut acc = FormElement::zero(spec);
    for (k, g) in normalized_odd_coeffs(&combo, max_k).into_iter().enumerate() {
        let a = FormElement::odd_generator(spec, OddGen::A(k as u32))?;
        acc = acc.add(&a.scale_q(&g))?;
    }
    Ok(acc)
}

/// `ĥ(U)·b`, the image of `tr[B·h(R^ξ/4π²)]` for the twist combo of `family`.
///
/// For rank-2 curvature `R^ξ = ΩJ` one has
/// `tr[B(R^ξ/4π²)^{2m+1}] = √−1·u^{2m+1}·tr[BJ]`, and `b = π√−1·tr[BJ]`.
pub fn twist_trace(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    if !spec.odd_gens.contains(&OddGen::B) {
        return Err(Error::InvalidArgument("ring has no twist trace generator".into()));
    }
    let combo = logderiv_combo(ComboKind::Twist, family, y_order_for(spec), spec.q_order)?;
    let h = substitute(spec, &combo.shift_pi(-1), Gen::U)?;
    h.mul(&FormElement::odd_generator(spec, OddGen::B)?)
}

fn check_variant(spec: &RingSpec, variant: CsVariant) -> Result<()> {
    let ok = match variant {
        CsVariant::Tm => spec.d % 4 == 3 && spec.odd_gens.iter().any(|g| matches!(g, OddGen::A(_))),
        CsVariant::Xi => spec.d % 4 == 3 && spec.odd_gens.contains(&OddGen::B),
        CsVariant::Tilde => spec.d % 4 == 1 && spec.odd_gens.iter().any(|g| matches!(g, OddGen::A(_))),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "ring with degree cap {} does not carry the {} transgression",
            spec.d,
            variant.name()
        )))
    }
}

fn finish(element: FormElement, kind: CsKind, spec: &RingSpec) -> CSForm {
    CSForm {
        element,
        kind,
        top_degree: spec.d,
    }
}

/// Transgression in the tangent connection on a `4k−1` ring.
pub fn cs_tm(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<CSForm> {
    check_variant(spec, CsVariant::Tm)?;
    let phi = phi_theta_route(family, spec)?;
    let e = phi.mul(&tangent_trace(family, spec)?)?.scale(&cs_prefactor(family));
    Ok(finish(e, CsKind { variant: CsVariant::Tm, family }, spec))
}

/// Transgression in the connection on ξ on a `4k−1` ring.
pub fn cs_xi(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<CSForm> {
    check_variant(spec, CsVariant::Xi)?;
    let phi = phi_theta_route(family, spec)?;
    let e = phi.mul(&twist_trace(family, spec)?)?.scale(&cs_prefactor(family));
    Ok(finish(e, CsKind { variant: CsVariant::Xi, family }, spec))
}

/// Transgression of Φ̃ in the tangent connection on a `4k+1` ring.
pub fn cs_tilde(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<CSForm> {
    check_variant(spec, CsVariant::Tilde)?;
    let phi = phi_tilde_route(family, spec)?;
    let e = phi.mul(&tangent_trace(family, spec)?)?.scale(&cs_prefactor(family));
    Ok(finish(e, CsKind { variant: CsVariant::Tilde, family }, spec))
}

/// Dispatch on the variant.
pub fn cs_form(kind: CsKind, spec: &Arc<RingSpec>) -> Result<CSForm> {
    match kind.variant {
        CsVariant::Tm => cs_tm(kind.family, spec),
        CsVariant::Xi => cs_xi(kind.family, spec),
        CsVariant::Tilde => cs_tilde(kind.family, spec),
    }
}

/// `CS(τ+1) = CS_{T-image}(τ)`, compared to truncation.
pub fn check_t_law(kind: CsKind, spec: &Arc<RingSpec>) -> Result<bool> {
    let lhs = cs_form(kind, spec)?.tau_shift();
    let rhs = cs_form(lhs.kind, spec)?;
    lhs.element.agrees_with(&rhs.element)
}

/// Coefficient of `∫tr[B·R^ξ_t]dt` in the top component of `cs_xi` on a
/// 3-dimensional ring. Uses `u·b = tr[B·R^ξ]/(4π)`.
pub fn dim3_twist_coefficient(family: PhiFamily, q_order: i64) -> Result<QExpansion> {
    let spec = Arc::new(RingSpec::xi(1, q_order));
    let top = cs_xi(family, &spec)?.top_component();
    let mut m = crate::charring::Monomial::one(spec.n_roots);
    m.u = 1;
    m.odd = Some(OddGen::B);
    for other in top.terms().keys() {
        if *other != m {
            let c = top.coeff(other);
            if !c.is_zero() {
                return Err(Error::InvalidArgument(format!("unexpected monomial {other} in 3-form")));
            }
        }
    }
    Ok(top.coeff(&m).scale(&Scalar::from_ratio(1, 4).shift_pi(-1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modforms::delta;

    #[test]
    fn odd_generators_by_degree() {
        assert_eq!(RingSpec::tm(3, 1).odd_gens, vec![OddGen::A(0), OddGen::A(1), OddGen::A(2)]);
        assert_eq!(RingSpec::tilde(2, 1).odd_gens, vec![OddGen::A(0), OddGen::A(1)]);
    }

    #[test]
    fn forms_are_odd_linear_with_offset_minus_two() {
        let tm = Arc::new(RingSpec::tm(2, 2));
        let xi = Arc::new(RingSpec::xi(2, 2));
        let ti = Arc::new(RingSpec::tilde(1, 2));
        for fam in PhiFamily::ALL {
            for f in [cs_tm(fam, &tm).unwrap(), cs_xi(fam, &xi).unwrap(), cs_tilde(fam, &ti).unwrap()] {
                assert!(f.element.is_odd_linear());
                assert_eq!(f.element.pi_offset().unwrap(), Some(-2));
            }
        }
    }

    #[test]
    fn t_laws_hold_for_all_variants() {
        for v in CsVariant::ALL {
            let spec = Arc::new(v.spec(2, 3));
            for fam in PhiFamily::ALL {
                assert!(check_t_law(CsKind { variant: v, family: fam }, &spec).unwrap(), "{v:?} {fam:?}");
            }
        }
    }

    #[test]
    fn l_top_component_has_integral_exponents() {
        let spec = Arc::new(RingSpec::tm(3, 3));
        let top = cs_tm(PhiFamily::L, &spec).unwrap().top_component();
        assert!(!top.is_empty());
        assert!(top.terms().values().all(|c| c.exponents_divisible_by(8)));
        assert!(top.terms().keys().all(|m| m.degree() == 11));
    }

    #[test]
    fn dim3_coefficients_are_delta_multiples() {
        let q = 4;
        let expect = [
            (PhiFamily::L, 1, Scalar::one()),
            (PhiFamily::W, 2, Scalar::from_ratio(1, 4)),
            (PhiFamily::WPrime, 3, Scalar::from_ratio(1, 4)),
        ];
        for (fam, i, c) in expect {
            let got = dim3_twist_coefficient(fam, q).unwrap();
            let want = delta(i, q).unwrap().series.scale(&c.shift_pi(-2));
            assert!((&got - &want).is_zero(), "{fam:?}: {got}");
        }
    }

    #[test]
    fn wrong_ring_is_rejected() {
        let spec = Arc::new(RingSpec::xi(2, 1));
        assert!(matches!(cs_tm(PhiFamily::W, &spec), Err(Error::InvalidArgument(_))));
    }
}
