//! Cancellation formulas from the modularity of top-degree CS forms.
//!
//! The Γ⁰(2) member of a family is decomposed in the weight-6 basis
//! `(8δ₂)³, (8δ₂)ε₂` monomial by monomial; the Γ₀(2) member must then equal
//! `2⁶[z₀(8δ₁)³ + z₁(8δ₁)ε₁]` with the same coefficients, and its constant
//! term is the cancellation identity.

mod display;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

pub use display::{display_compare, DisplayCheck, DisplayComparison};

use crate::charring::{FormElement, Monomial, RingSpec};
use crate::error::{Error, Result};
use crate::modforms::{build_from, decompose_in};
use crate::qseries::QExpansion;
use crate::scalars::Scalar;
use crate::theta::PhiFamily;
use crate::transgress::{cs_form, CsKind, CsVariant};

/// The three eleven- and nine-dimensional cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CaseId {
    #[serde(rename = "TM-11")]
    Tm11,
    #[serde(rename = "XI-11")]
    Xi11,
    #[serde(rename = "TILDE-9")]
    Tilde9,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::Tm11, CaseId::Xi11, CaseId::Tilde9];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Tm11 => "TM-11",
            CaseId::Xi11 => "XI-11",
            CaseId::Tilde9 => "TILDE-9",
        }
    }

    pub fn variant(self) -> CsVariant {
        match self {
            CaseId::Tm11 => CsVariant::Tm,
            CaseId::Xi11 => CsVariant::Xi,
            CaseId::Tilde9 => CsVariant::Tilde,
        }
    }

    /// `k` with `D = 4k−1` (TM, XI) or `D = 4k+1` (TILDE).
    pub fn k(self) -> u32 {
        match self {
            CaseId::Tilde9 => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim_start_matches("cancel-").to_ascii_uppercase();
        match t.as_str() {
            "TM-11" => Ok(CaseId::Tm11),
            "XI-11" => Ok(CaseId::Xi11),
            "TILDE-9" => Ok(CaseId::Tilde9),
            _ => Err(Error::InvalidArgument(format!("unknown cancellation case {s:?}"))),
        }
    }
}

/// A case together with its ring.
#[derive(Clone, Debug)]
pub struct CancellationCase {
    pub id: CaseId,
    pub spec: Arc<RingSpec>,
    pub weight: i64,
}

impl CancellationCase {
    pub fn new(id: CaseId, q_order: i64) -> Self {
        let v = id.variant();
        CancellationCase {
            id,
            spec: Arc::new(v.spec(id.k(), q_order)),
            weight: v.weight(id.k()),
        }
    }
}

/// Outcome of [`derive`].
#[derive(Clone, Debug, Serialize)]
pub struct CancellationReport {
    pub case: CaseId,
    pub q_order: i64,
    pub z0: FormElement,
    pub z1: FormElement,
    /// `Γ₀(2)` side minus `2⁶[z₀(8δ₁)³ + z₁(8δ₁)ε₁]`.
    #[serde(skip)]
    pub residual: FormElement,
    pub residual_zero: bool,
    pub lhs_const: FormElement,
    pub rhs_const: FormElement,
    pub constants_equal: bool,
    pub matched_display: String,
    pub displays: Vec<DisplayCheck>,
}

impl CancellationReport {
    pub fn pass(&self) -> bool {
        self.residual_zero && self.constants_equal
    }
}

/// Splits each coefficient of a top component into its weight-`w` basis
/// coordinates for the group with index `i`.
fn decompose_element(
    top: &FormElement,
    i: u8,
    weight: i64,
    label: &str,
) -> Result<(FormElement, FormElement)> {
    let spec = top.spec();
    let mut z0 = Vec::new();
    let mut z1 = Vec::new();
    for (m, c) in top.terms() {
        let parts = decompose_in(c, i, weight, &format!("{label} at {m}"))?;
        for ((a, b), z) in parts {
            let target = match (a, b) {
                (3, 0) => &mut z0,
                (1, 1) => &mut z1,
                _ => {
                    if z.is_zero() {
                        continue;
                    }
                    return Err(Error::InvalidArgument(format!("unexpected basis monomial ({a},{b})")));
                }
            };
            target.push((m.clone(), QExpansion::constant(z)));
        }
    }
    Ok((FormElement::from_terms(spec, z0), FormElement::from_terms(spec, z1)))
}

fn constant_coeffs(z: &FormElement) -> impl Iterator<Item = (&Monomial, Scalar)> {
    z.terms().iter().map(|(m, c)| (m, c.coeff(0)))
}

/// `scale·Σ_(a,b) z_(a,b)·(8δᵢ)^a εᵢ^b` monomial by monomial.
fn rebuild(z0: &FormElement, z1: &FormElement, i: u8, weight: i64, scale: &Scalar) -> Result<FormElement> {
    let spec = z0.spec();
    let mut terms = Vec::new();
    let mut monos: Vec<&Monomial> = z0.terms().keys().chain(z1.terms().keys()).collect();
    monos.sort();
    monos.dedup();
    for m in monos {
        let coeffs = [((3, 0), z0.coeff(m).coeff(0)), ((1, 1), z1.coeff(m).coeff(0))];
        let s = build_from(&coeffs, i, weight, spec.q_order)?;
        terms.push((m.clone(), s.scale(scale)));
    }
    Ok(FormElement::from_terms(spec, terms))
}

/// Runs the cancellation derivation for one case.
pub fn derive(case: &CancellationCase) -> Result<CancellationReport> {
    let spec = &case.spec;
    if spec.q_order < 2 {
        return Err(Error::InsufficientOrder(format!(
            "{} needs q-order at least 2, got {}",
            case.id, spec.q_order
        )));
    }
    let variant = case.id.variant();
    let w_kind = CsKind { variant, family: PhiFamily::W };
    let l_kind = CsKind { variant, family: PhiFamily::L };
    let w_top = cs_form(w_kind, spec)?.top_component();
    let (z0, z1) = decompose_element(&w_top, 2, case.weight, &w_kind.to_string())?;

    let l_top = cs_form(l_kind, spec)?.top_component();
    let expected = rebuild(&z0, &z1, 1, case.weight, &Scalar::from_int(64))?;
    let residual = l_top.sub(&expected)?;
    let residual_zero = residual.is_zero();

    let lhs_const = l_top.map_coeffs(|c| QExpansion::constant(c.coeff(0)));
    // 2⁶[z₀·2³ + z₁·2·(1/16)] = 8(64z₀ + z₁)
    let rhs_const = z0.scale(&Scalar::from_int(64)).add(&z1)?.scale(&Scalar::from_int(8));
    let constants_equal = lhs_const.agrees_with(&rhs_const)?;

    let mut report = CancellationReport {
        case: case.id,
        q_order: spec.q_order,
        z0,
        z1,
        residual,
        residual_zero,
        lhs_const,
        rhs_const,
        constants_equal,
        matched_display: String::new(),
        displays: Vec::new(),
    };
    let cmp = display_compare(&report)?;
    report.matched_display = cmp.summary;
    report.displays = cmp.checks;
    Ok(report)
}

/// Coordinates `(z₀, z₁)` of every monomial, as plain scalars.
pub fn coordinates(report: &CancellationReport) -> Vec<(String, Scalar, Scalar)> {
    let mut out: Vec<(String, Scalar, Scalar)> = Vec::new();
    for (m, z) in constant_coeffs(&report.z0) {
        out.push((m.to_string(), z, report.z1.coeff(m).coeff(0)));
    }
    for (m, z) in constant_coeffs(&report.z1) {
        if report.z0.coeff(m).is_zero() {
            out.push((m.to_string(), Scalar::zero(), z));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_names_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.name().parse::<CaseId>().unwrap(), c);
            assert_eq!(format!("cancel-{c}").parse::<CaseId>().unwrap(), c);
        }
        assert!("cancel-XX".parse::<CaseId>().is_err());
    }

    #[test]
    fn weights_are_six() {
        for c in CaseId::ALL {
            assert_eq!(CancellationCase::new(c, 2).weight, 6);
        }
    }

    #[test]
    fn low_order_is_rejected() {
        let case = CancellationCase::new(CaseId::Tm11, 1);
        assert!(matches!(derive(&case), Err(Error::InsufficientOrder(_))));
    }

    #[test]
    fn tilde_case_at_order_two() {
        let r = derive(&CancellationCase::new(CaseId::Tilde9, 2)).unwrap();
        assert!(r.residual_zero);
        assert!(r.constants_equal);
        assert!(!r.z0.is_empty());
    }

    fn find<'a>(r: &'a CancellationReport, label: &str) -> Option<&'a DisplayCheck> {
        r.displays.iter().find(|c| c.label == label)
    }

    #[test]
    fn tm_corollary_display_holds() {
        let r = derive(&CancellationCase::new(CaseId::Tm11, 2)).unwrap();
        assert!(r.pass());
        assert!(find(&r, "z0").unwrap().matches);
        assert!(find(&r, "identity as printed[-3, sin R/2pi]").unwrap().matches);
        assert!(find(&r, "z1[61, sin R/2pi] derived").is_some());
    }

    #[test]
    fn xi_constants_are_solved() {
        let r = derive(&CancellationCase::new(CaseId::Xi11, 2)).unwrap();
        assert!(r.pass());
        assert!(find(&r, "lhs").unwrap().matches);
        assert!(find(&r, "z1[-67] derived").is_some());
        assert!(find(&r, "identity[-3] derived").is_some());
    }
}
