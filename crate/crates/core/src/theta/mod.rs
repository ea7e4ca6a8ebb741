//! Two-variable expansions of the Jacobi theta functions θ, θ₁, θ₂, θ₃ and the
//! quotients and logarithmic-derivative combinations built from them.
//!
//! Every expansion is a [`YSeries`] in `y = πv`. A `y_order` of `Y` keeps the
//! coefficients of `y⁰ … y^{Y−1}`; a `q_order` of `n` keeps exponents below
//! `qⁿ` (numerator `8n`).

mod yseries;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

pub use yseries::{Parity, YSeries};

use crate::error::{Error, Result};
use crate::qseries::{QExpansion, EXACT};
use crate::scalars::Scalar;

/// One of the four Jacobi theta functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ThetaFamily {
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "theta1")]
    Theta1,
    #[serde(rename = "theta2")]
    Theta2,
    #[serde(rename = "theta3")]
    Theta3,
}

impl ThetaFamily {
    pub const ALL: [ThetaFamily; 4] = [
        ThetaFamily::Theta,
        ThetaFamily::Theta1,
        ThetaFamily::Theta2,
        ThetaFamily::Theta3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ThetaFamily::Theta => "theta",
            ThetaFamily::Theta1 => "theta1",
            ThetaFamily::Theta2 => "theta2",
            ThetaFamily::Theta3 => "theta3",
        }
    }

    /// Image under τ ↦ τ+1, with the ζ₈ power picked up.
    pub fn t_image(self) -> (ThetaFamily, i64) {
        match self {
            ThetaFamily::Theta => (ThetaFamily::Theta, 1),
            ThetaFamily::Theta1 => (ThetaFamily::Theta1, 1),
            ThetaFamily::Theta2 => (ThetaFamily::Theta3, 0),
            ThetaFamily::Theta3 => (ThetaFamily::Theta2, 0),
        }
    }
}

impl fmt::Display for ThetaFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ThetaFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" | "theta0" => Ok(ThetaFamily::Theta),
            "theta1" => Ok(ThetaFamily::Theta1),
            "theta2" => Ok(ThetaFamily::Theta2),
            "theta3" => Ok(ThetaFamily::Theta3),
            _ => Err(Error::InvalidArgument(format!("unknown theta function '{s}'"))),
        }
    }
}

/// The three characteristic-form families. Each pairs with one theta function:
/// θ₁ for `L`, θ₂ for `W`, θ₃ for `WPrime`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PhiFamily {
    #[serde(rename = "Phi_L")]
    L,
    #[serde(rename = "Phi_W")]
    W,
    #[serde(rename = "Phi_W'")]
    WPrime,
}

impl PhiFamily {
    pub const ALL: [PhiFamily; 3] = [PhiFamily::L, PhiFamily::W, PhiFamily::WPrime];

    pub fn name(self) -> &'static str {
        match self {
            PhiFamily::L => "Phi_L",
            PhiFamily::W => "Phi_W",
            PhiFamily::WPrime => "Phi_W'",
        }
    }

    pub fn theta(self) -> ThetaFamily {
        match self {
            PhiFamily::L => ThetaFamily::Theta1,
            PhiFamily::W => ThetaFamily::Theta2,
            PhiFamily::WPrime => ThetaFamily::Theta3,
        }
    }

    /// The two remaining theta functions among θ₁, θ₂, θ₃, in the order the
    /// u-factor of each family uses them.
    pub fn others(self) -> (ThetaFamily, ThetaFamily) {
        match self {
            PhiFamily::L => (ThetaFamily::Theta3, ThetaFamily::Theta2),
            PhiFamily::W => (ThetaFamily::Theta3, ThetaFamily::Theta1),
            PhiFamily::WPrime => (ThetaFamily::Theta1, ThetaFamily::Theta2),
        }
    }

    /// Family obtained under τ ↦ τ+1.
    pub fn t_image(self) -> PhiFamily {
        match self {
            PhiFamily::L => PhiFamily::L,
            PhiFamily::W => PhiFamily::WPrime,
            PhiFamily::WPrime => PhiFamily::W,
        }
    }
}

impl fmt::Display for PhiFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PhiFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches("Phi_").trim_start_matches("phi_") {
            "L" | "l" => Ok(PhiFamily::L),
            "W" | "w" => Ok(PhiFamily::W),
            "W'" | "w'" | "Wp" | "wp" | "Wprime" | "WPrime" | "wprime" => Ok(PhiFamily::WPrime),
            _ => Err(Error::InvalidArgument(format!("unknown family '{s}'"))),
        }
    }
}

/// Which bracketed log-derivative combination to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ComboKind {
    /// `1/z − θ'/θ + θ_i'/θ_i`, paired with the tangent-bundle trace.
    Tangent,
    /// `θ_a'/θ_a + θ_b'/θ_b − 2θ_i'/θ_i`, paired with the twist-bundle trace.
    Twist,
}

fn q_cap(q_order: i64) -> i64 {
    8 * q_order
}

/// Truncated expansion of one theta function.
///
/// θ and θ₁ carry the prefactor `2q^{1/8}` and come back with q-truncation
/// `8·q_order + 1`; θ₂ and θ₃ with `8·q_order`.
pub fn theta_expand(family: ThetaFamily, y_order: i64, q_order: i64) -> YSeries {
    let n = q_cap(q_order);
    let yt = y_order.max(1);
    let two = BigRational::from_integer(2.into());
    let cos2 = YSeries::cos(&two, yt);
    let (sign, half) = match family {
        ThetaFamily::Theta => (-1, false),
        ThetaFamily::Theta1 => (1, false),
        ThetaFamily::Theta2 => (-1, true),
        ThetaFamily::Theta3 => (1, true),
    };
    // Euler factor Π(1 − q^j), y-independent.
    let mut euler = QExpansion::one().truncate(n);
    for j in 1.. {
        if 8 * j >= n {
            break;
        }
        euler = euler.mul_to(&QExpansion::from_ints(&[(0, 1), (8 * j, -1)], EXACT), n);
    }
    let mut prod = YSeries::one(yt).truncate_q(n);
    for j in 1.. {
        let a = if half { 8 * j - 4 } else { 8 * j };
        if a >= n {
            break;
        }
        // 1 ± 2cos(2y)q^a + q^{2a}
        let constant = QExpansion::from_ints(&[(0, 1), (2 * a, 1)], EXACT);
        let factor = &YSeries::constant(constant, yt)
            + &cos2.scale_q(&QExpansion::from_ints(&[(a, 2 * sign)], EXACT));
        prod = prod.mul_to(&factor, n);
    }
    let prod = prod.scale_q(&euler);
    match family {
        ThetaFamily::Theta | ThetaFamily::Theta1 => {
            let trig = if family == ThetaFamily::Theta {
                YSeries::sin(&BigRational::one(), yt)
            } else {
                YSeries::cos(&BigRational::one(), yt)
            };
            (&trig * &prod).scale_q(&QExpansion::monomial(1, Scalar::from_int(2)))
        }
        _ => prod,
    }
}

/// θ_i(0, τ) as a q-series.
pub fn theta_nullwert(family: ThetaFamily, q_order: i64) -> QExpansion {
    theta_expand(family, 1, q_order).at_zero()
}

/// θ'(0, τ), carrying one power of π.
pub fn theta_prime_zero(q_order: i64) -> QExpansion {
    theta_expand(ThetaFamily::Theta, 2, q_order).theta_prime().at_zero()
}

/// Derivative ∂/∂v of a y-series, see [`YSeries::theta_prime`].
pub fn theta_prime(s: &YSeries) -> YSeries {
    s.theta_prime()
}

/// Laurent quotient `a / b`.
pub fn y_div(a: &YSeries, b: &YSeries) -> Result<YSeries> {
    a.y_div(b)
}

/// `zθ'(0)/θ(z) · θ_i(z)/θ_i(0)` for the theta function `θ_i` of `family`.
///
/// Even, with constant term 1.
pub fn f_quotient(family: PhiFamily, y_order: i64, q_order: i64) -> Result<YSeries> {
    let yw = y_order + 2;
    let th = theta_expand(ThetaFamily::Theta, yw, q_order);
    let thi = theta_expand(family.theta(), yw, q_order);
    // z·θ'(0) = y·(y¹-coefficient of θ)
    let c1 = th.coeff(1);
    let ratio = thi.y_div(&th)?.shift_y(1);
    let norm = thi.at_zero().inv()?;
    let f = ratio.scale_q(&(&c1 * &norm));
    Ok(f.truncate_y(y_order).truncate_q(q_cap(q_order)))
}

/// `θ'(z)/θ(z)` for one theta function; Laurent for θ.
pub fn log_derivative(family: ThetaFamily, y_order: i64, q_order: i64) -> Result<YSeries> {
    let yw = y_order + 2;
    let th = theta_expand(family, yw, q_order);
    let ld = th.theta_prime().y_div(&th)?;
    Ok(ld.truncate_y(y_order).truncate_q(q_cap(q_order)))
}

/// The bracketed combination of log-derivatives for `family`.
///
/// Tangent: `1/z − θ'/θ + θ_i'/θ_i`. Twist: `θ_a'/θ_a + θ_b'/θ_b − 2θ_i'/θ_i`.
/// Both are odd with valuation ≥ 1; the `y^{2k+1}` coefficient carries π¹.
pub fn logderiv_combo(kind: ComboKind, family: PhiFamily, y_order: i64, q_order: i64) -> Result<YSeries> {
    let ld = |f: ThetaFamily| log_derivative(f, y_order, q_order);
    let combo = match kind {
        ComboKind::Tangent => {
            // 1/z = π·y⁻¹
            let pole = YSeries::monomial(-1, Scalar::pi_pow(1), y_order);
            &(&pole - &ld(ThetaFamily::Theta)?) + &ld(family.theta())?
        }
        ComboKind::Twist => {
            let (a, b) = family.others();
            let main = ld(family.theta())?.scale(&Scalar::from_int(2));
            &(&ld(a)? + &ld(b)?) - &main
        }
    };
    let residue = combo.coeff(-1);
    if !residue.is_zero() {
        return Err(Error::PoleNotCancelled(format!(
            "{kind:?} combination for {family}: y^-1 coefficient {residue}"
        )));
    }
    Ok(YSeries::new(
        combo.iter().filter(|(m, _)| *m >= 0).map(|(m, c)| (m, c.clone())),
        combo.y_trunc(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn theta_prefactor_and_parity() {
        let th = theta_expand(ThetaFamily::Theta, 6, 2);
        assert_eq!(th.parity(), Parity::Odd);
        let c1 = th.coeff(1);
        assert_eq!(c1.valuation(), 1);
        assert_eq!(c1.coeff(1), Scalar::from_int(2));
        for f in [ThetaFamily::Theta1, ThetaFamily::Theta2, ThetaFamily::Theta3] {
            assert_eq!(theta_expand(f, 6, 2).parity(), Parity::Even, "{f}");
        }
    }

    #[test]
    fn theta2_nullwert_leading_terms() {
        let t2 = theta_nullwert(ThetaFamily::Theta2, 2);
        assert_eq!(t2.coeff(0), Scalar::one());
        assert_eq!(t2.coeff(4), Scalar::from_int(-2));
        assert_eq!(t2.trunc(), 16);
    }

    #[test]
    fn theta_prime_zero_leading() {
        let tp = theta_prime_zero(3);
        assert_eq!(tp.valuation(), 1);
        assert_eq!(tp.coeff(1), Scalar::from_int(2).shift_pi(1));
    }

    #[test]
    fn jacobi_identity_low_order() {
        let lhs = theta_prime_zero(4);
        let rhs = &(&theta_nullwert(ThetaFamily::Theta1, 4) * &theta_nullwert(ThetaFamily::Theta2, 4))
            * &theta_nullwert(ThetaFamily::Theta3, 4);
        let diff = &lhs - &rhs.shift_pi(1);
        assert!(diff.is_zero());
        assert!(diff.trunc() >= 32);
    }

    #[test]
    fn log_derivative_residue() {
        let ld = log_derivative(ThetaFamily::Theta, 6, 2).unwrap();
        assert_eq!(ld.valuation(), -1);
        assert_eq!(ld.coeff(-1), QExpansion::constant(Scalar::pi_pow(1)).truncate(16));
    }

    #[test]
    fn f_quotient_l_at_q0_is_y_cot_y() {
        let f = f_quotient(PhiFamily::L, 8, 2).unwrap();
        assert_eq!(f.parity(), Parity::Even);
        let q0 = |m: i64| f.coeff(m).coeff(0);
        let expected = YSeries::cos(&rat(1, 1), 10)
            .y_div(&YSeries::sin(&rat(1, 1), 10))
            .unwrap()
            .shift_y(1);
        for m in 0..8 {
            assert_eq!(q0(m), expected.coeff(m).coeff(0), "y^{m}");
        }
        assert_eq!(f.coeff(0), QExpansion::one().truncate(16));
    }

    #[test]
    fn f_quotient_w_at_q0_is_y_over_sin_y() {
        let f = f_quotient(PhiFamily::W, 8, 2).unwrap();
        let expected = YSeries::sin(&rat(1, 1), 10).inv().unwrap().shift_y(1);
        for m in 0..8 {
            assert_eq!(f.coeff(m).coeff(0), expected.coeff(m).coeff(0), "y^{m}");
        }
    }

    #[test]
    fn combos_are_odd_and_regular() {
        for kind in [ComboKind::Tangent, ComboKind::Twist] {
            for fam in PhiFamily::ALL {
                let c = logderiv_combo(kind, fam, 8, 2).unwrap();
                assert!(c.valuation() >= 1, "{kind:?} {fam}");
                assert_eq!(c.parity(), Parity::Odd, "{kind:?} {fam}");
                assert_eq!(c.pi_degrees_check(), Some(1));
            }
        }
    }

    #[test]
    fn twist_combo_first_coefficient() {
        // ∂_z h_L at 0 = π·(y¹-coefficient) = 2π² + O(q^{1/2})
        let c = logderiv_combo(ComboKind::Twist, PhiFamily::L, 4, 2).unwrap();
        let d = c.coeff(1).shift_pi(1);
        assert_eq!(d.coeff(0), Scalar::from_int(2).shift_pi(2));
    }

    impl YSeries {
        fn pi_degrees_check(&self) -> Option<i32> {
            let degs: std::collections::BTreeSet<i32> =
                self.coeffs().values().flat_map(|c| c.pi_degrees()).collect();
            (degs.len() == 1).then(|| *degs.iter().next().unwrap())
        }
    }
}
