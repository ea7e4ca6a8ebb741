//! The modular forms δ₁, δ₂, δ₃ (weight 2) and ε₁, ε₂, ε₃ (weight 4) built from
//! theta nullwerte, and the monomial basis `(8δ)^a ε^b` used to decompose
//! weight-`2m` forms.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qseries::QExpansion;
use crate::scalars::Scalar;
use crate::theta::{theta_nullwert, ThetaFamily};

/// The three index-3 subgroups of SL₂(ℤ) the forms live on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ModularGroup {
    #[serde(rename = "Gamma_0(2)")]
    Gamma0,
    #[serde(rename = "Gamma^0(2)")]
    GammaUpper0,
    #[serde(rename = "Gamma_theta")]
    GammaTheta,
}

impl ModularGroup {
    /// Conjugation by T: Γ₀(2) is fixed, Γ⁰(2) and Γ_θ swap.
    pub fn t_image(self) -> ModularGroup {
        match self {
            ModularGroup::Gamma0 => ModularGroup::Gamma0,
            ModularGroup::GammaUpper0 => ModularGroup::GammaTheta,
            ModularGroup::GammaTheta => ModularGroup::GammaUpper0,
        }
    }

    /// Index `i` of δᵢ, εᵢ living on this group.
    pub fn index(self) -> u8 {
        match self {
            ModularGroup::Gamma0 => 1,
            ModularGroup::GammaUpper0 => 2,
            ModularGroup::GammaTheta => 3,
        }
    }

    fn from_index(i: u8) -> Result<ModularGroup> {
        match i {
            1 => Ok(ModularGroup::Gamma0),
            2 => Ok(ModularGroup::GammaUpper0),
            3 => Ok(ModularGroup::GammaTheta),
            _ => Err(Error::InvalidArgument(format!("form index must be 1..3, got {i}"))),
        }
    }
}

impl fmt::Display for ModularGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModularGroup::Gamma0 => "Gamma_0(2)",
            ModularGroup::GammaUpper0 => "Gamma^0(2)",
            ModularGroup::GammaTheta => "Gamma_theta",
        })
    }
}

/// A q-expansion tagged with its weight and group.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModularForm {
    pub name: String,
    pub weight: i64,
    pub group: ModularGroup,
    pub series: QExpansion,
}

/// δ or ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormKind {
    Delta,
    Epsilon,
}

/// Named form such as `delta2` or `epsilon1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FormName {
    pub kind: FormKind,
    pub index: u8,
}

impl FromStr for FormName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = if let Some(r) = s.strip_prefix("delta") {
            (FormKind::Delta, r)
        } else if let Some(r) = s.strip_prefix("epsilon") {
            (FormKind::Epsilon, r)
        } else {
            return Err(Error::InvalidArgument(format!("unknown modular form '{s}'")));
        };
        let index: u8 = rest
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("unknown modular form '{s}'")))?;
        ModularGroup::from_index(index)?;
        Ok(FormName { kind, index })
    }
}

impl FormName {
    pub fn build(self, q_order: i64) -> Result<ModularForm> {
        match self.kind {
            FormKind::Delta => delta(self.index, q_order),
            FormKind::Epsilon => epsilon(self.index, q_order),
        }
    }
}

fn fourth_powers(q_order: i64) -> [QExpansion; 3] {
    [ThetaFamily::Theta1, ThetaFamily::Theta2, ThetaFamily::Theta3].map(|f| {
        let t = theta_nullwert(f, q_order);
        let t2 = &t * &t;
        &t2 * &t2
    })
}

fn check_order(q_order: i64) -> Result<()> {
    if q_order < 1 {
        return Err(Error::InsufficientOrder(format!("q-order must be at least 1, got {q_order}")));
    }
    Ok(())
}

/// δᵢ: `(θ₂⁴+θ₃⁴)/8`, `−(θ₁⁴+θ₃⁴)/8`, `(θ₁⁴−θ₂⁴)/8`.
pub fn delta(i: u8, q_order: i64) -> Result<ModularForm> {
    check_order(q_order)?;
    let group = ModularGroup::from_index(i)?;
    let [t1, t2, t3] = fourth_powers(q_order);
    let eighth = Scalar::from_ratio(1, 8);
    let s = match i {
        1 => (&t2 + &t3).scale(&eighth),
        2 => (&t1 + &t3).scale(&-&eighth),
        _ => (&t1 - &t2).scale(&eighth),
    };
    Ok(ModularForm {
        name: format!("delta{i}"),
        weight: 2,
        group,
        series: s.truncate(8 * q_order),
    })
}

/// εᵢ: `θ₂⁴θ₃⁴/16`, `θ₁⁴θ₃⁴/16`, `−θ₁⁴θ₂⁴/16`.
pub fn epsilon(i: u8, q_order: i64) -> Result<ModularForm> {
    check_order(q_order)?;
    let group = ModularGroup::from_index(i)?;
    let [t1, t2, t3] = fourth_powers(q_order);
    let sixteenth = Scalar::from_ratio(1, 16);
    let s = match i {
        1 => (&t2 * &t3).scale(&sixteenth),
        2 => (&t1 * &t3).scale(&sixteenth),
        _ => (&t1 * &t2).scale(&-&sixteenth),
    };
    Ok(ModularForm {
        name: format!("epsilon{i}"),
        weight: 4,
        group,
        series: s.truncate(8 * q_order),
    })
}

/// τ ↦ τ+1 on the series, with the group relabelled.
pub fn t_transform(f: &ModularForm) -> ModularForm {
    let group = f.group.t_image();
    let name = match f.name.as_bytes().last() {
        Some(b'2') | Some(b'3') => {
            let stem = &f.name[..f.name.len() - 1];
            format!("{stem}{}", group.index())
        }
        _ => f.name.clone(),
    };
    ModularForm {
        name,
        weight: f.weight,
        group,
        series: f.series.tau_shift(),
    }
}

/// Exponent pairs `(a, b)` with `2a + 4b = weight`, ordered by `b`, i.e. by
/// the q-valuation `b/2` of `(8δ)^a ε^b`.
pub fn basis_monomials(weight: i64) -> Result<Vec<(i64, i64)>> {
    if weight < 0 || weight % 2 != 0 {
        return Err(Error::InvalidArgument(format!("weight must be even and nonnegative, got {weight}")));
    }
    let m = weight / 2;
    Ok((0..=m / 2).map(|b| (m - 2 * b, b)).collect())
}

/// The generators `8δᵢ` and `εᵢ` for the group with index `i`.
pub fn generators(i: u8, q_order: i64) -> Result<(QExpansion, QExpansion)> {
    let d = delta(i, q_order)?.series.scale(&Scalar::from_int(8));
    let e = epsilon(i, q_order)?.series;
    Ok((d, e))
}

/// The values `(8δ)^a ε^b` for every basis monomial of `weight`.
pub fn basis_series(i: u8, weight: i64, q_order: i64) -> Result<Vec<((i64, i64), QExpansion)>> {
    let (d, e) = generators(i, q_order)?;
    basis_monomials(weight)?
        .into_iter()
        .map(|(a, b)| {
            let mut p = QExpansion::one();
            for _ in 0..a {
                p = &p * &d;
            }
            for _ in 0..b {
                p = &p * &e;
            }
            Ok(((a, b), p))
        })
        .collect()
}

/// `Σ z_(a,b)·(8δᵢ)^a εᵢ^b`.
pub fn build_from(coeffs: &[((i64, i64), Scalar)], i: u8, weight: i64, q_order: i64) -> Result<QExpansion> {
    let basis = basis_series(i, weight, q_order)?;
    let mut acc = QExpansion::exact_zero();
    for (ab, z) in coeffs {
        let (_, s) = basis
            .iter()
            .find(|(k, _)| k == ab)
            .ok_or_else(|| Error::InvalidArgument(format!("{ab:?} is not a weight-{weight} monomial")))?;
        acc = &acc + &s.scale(z);
    }
    Ok(acc.truncate(8 * q_order))
}

/// Solves `f = Σ z·(8δ₂)^a ε₂^b` from the leading q^{1/2}-coefficients and
/// checks every remaining known coefficient.
pub fn basis_decompose(f: &QExpansion, weight: i64) -> Result<Vec<((i64, i64), Scalar)>> {
    decompose_in(f, 2, weight, "input")
}

/// [`basis_decompose`] against the generators of group index `i`, with a
/// label used in the error on failure.
pub fn decompose_in(f: &QExpansion, i: u8, weight: i64, context: &str) -> Result<Vec<((i64, i64), Scalar)>> {
    let monos = basis_monomials(weight)?;
    let needed = 4 * (monos.len() as i64 - 1) + 1;
    if f.trunc() < needed {
        return Err(Error::InsufficientOrder(format!(
            "{context}: truncation q^({}/8) cannot determine {} coefficients",
            f.trunc(),
            monos.len()
        )));
    }
    let q_order = (f.trunc() + 7) / 8;
    let basis = basis_series(i, weight, q_order)?;
    let mut residual = f.clone();
    let mut out = Vec::with_capacity(basis.len());
    for ((a, b), s) in &basis {
        let num = 4 * b;
        let lead = s.coeff(num);
        let lead_inv = lead
            .inv()
            .ok_or_else(|| Error::NonInvertible(lead.to_string()))?;
        let z = &residual.coeff(num) * &lead_inv;
        residual = &residual - &s.scale(&z);
        out.push(((*a, *b), z));
    }
    if let Some((&num, _)) = residual.terms().iter().next() {
        return Err(Error::Decomposition {
            num,
            context: context.to_string(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int_coeff(f: &ModularForm, n: i64) -> Scalar {
        f.series.coeff(n)
    }

    #[test]
    fn fourier_leading_terms() {
        let d1 = delta(1, 2).unwrap();
        assert_eq!(int_coeff(&d1, 0), Scalar::from_ratio(1, 4));
        assert_eq!(int_coeff(&d1, 4), Scalar::zero());
        assert_eq!(int_coeff(&d1, 8), Scalar::from_int(6));
        let e1 = epsilon(1, 2).unwrap();
        assert_eq!(int_coeff(&e1, 0), Scalar::from_ratio(1, 16));
        assert_eq!(int_coeff(&e1, 8), Scalar::from_int(-1));
        let d2 = delta(2, 2).unwrap();
        assert_eq!(int_coeff(&d2, 0), Scalar::from_ratio(-1, 8));
        assert_eq!(int_coeff(&d2, 4), Scalar::from_int(-3));
        let e2 = epsilon(2, 2).unwrap();
        assert_eq!(int_coeff(&e2, 0), Scalar::zero());
        assert_eq!(int_coeff(&e2, 4), Scalar::one());
        let d3 = delta(3, 2).unwrap();
        assert_eq!(int_coeff(&d3, 4), Scalar::from_int(3));
        let e3 = epsilon(3, 2).unwrap();
        assert_eq!(int_coeff(&e3, 4), Scalar::from_int(-1));
    }

    #[test]
    fn t_transform_swaps_two_and_three() {
        let d2 = delta(2, 6).unwrap();
        let d3 = delta(3, 6).unwrap();
        let t = t_transform(&d2);
        assert_eq!(t, d3);
        assert_eq!(t_transform(&t), d2);
        assert_eq!(t_transform(&epsilon(2, 6).unwrap()), epsilon(3, 6).unwrap());
        let d1 = delta(1, 6).unwrap();
        assert_eq!(t_transform(&d1), d1);
    }

    #[test]
    fn decompose_basis_elements() {
        let basis = basis_series(2, 6, 4).unwrap();
        for (k, (_, s)) in basis.iter().enumerate() {
            let z = basis_decompose(&s.truncate(32), 6).unwrap();
            for (j, (_, c)) in z.iter().enumerate() {
                let expected = if j == k { Scalar::one() } else { Scalar::zero() };
                assert_eq!(c, &expected);
            }
        }
    }

    #[test]
    fn decompose_rejects_non_modular_input() {
        let f = QExpansion::from_ints(&[(0, 1), (8, 1)], 32);
        assert!(matches!(basis_decompose(&f, 6), Err(Error::Decomposition { .. })));
        assert!(matches!(
            basis_decompose(&QExpansion::one().truncate(4), 6),
            Err(Error::InsufficientOrder(_))
        ));
    }
}
