//! Φ forms assembled from theta quotients.

use std::sync::Arc;

use super::{substitute, y_order_for, FormElement, Gen, RingSpec};
use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::theta::{f_quotient, theta_expand, theta_prime_zero, PhiFamily, ThetaFamily, YSeries};

fn ratio_at(t: &YSeries, q_cap: i64) -> Result<YSeries> {
    // θ_i(u)/θ_i(0)
    Ok(t.scale_q(&t.at_zero().inv()?).truncate_q(q_cap))
}

/// `θ_i(0)²/θ_i(u)² · θ_a(u)/θ_a(0) · θ_b(u)/θ_b(0)` for the theta functions of
/// `family`.
pub fn u_factor(family: PhiFamily, y_order: i64, q_order: i64) -> Result<YSeries> {
    let cap = 8 * q_order;
    let (a, b) = family.others();
    let main = ratio_at(&theta_expand(family.theta(), y_order, q_order), cap)?;
    let main_inv = main.inv()?;
    let ta = ratio_at(&theta_expand(a, y_order, q_order), cap)?;
    let tb = ratio_at(&theta_expand(b, y_order, q_order), cap)?;
    Ok((&(&main_inv * &main_inv) * &(&ta * &tb)).truncate_q(cap))
}

/// `θ'(0)/θ(u) · (θ_i(u)/θ_i(0) − θ_i(0)/θ_i(u) · θ_a(u)/θ_a(0) · θ_b(u)/θ_b(0))`.
///
/// The simple pole of `θ'(0)/θ(u)` meets the double zero of the bracket, so
/// the result is odd with valuation 1.
pub fn tilde_u_factor(family: PhiFamily, y_order: i64, q_order: i64) -> Result<YSeries> {
    let cap = 8 * q_order;
    let yw = y_order + 2;
    let (a, b) = family.others();
    let main = ratio_at(&theta_expand(family.theta(), yw, q_order), cap)?;
    let ta = ratio_at(&theta_expand(a, yw, q_order), cap)?;
    let tb = ratio_at(&theta_expand(b, yw, q_order), cap)?;
    let bracket = &main - &(&main.inv()? * &(&ta * &tb));
    let pole = theta_expand(ThetaFamily::Theta, yw, q_order)
        .inv()?
        .scale_q(&theta_prime_zero(q_order));
    let f = bracket.mul_to(&pole, cap);
    let residue = f.coeff(-1);
    if !residue.is_zero() {
        return Err(Error::PoleNotCancelled(format!("u-factor of tilde {family}: residue {residue}")));
    }
    Ok(YSeries::new(
        f.iter().filter(|(m, _)| *m >= 0).map(|(m, c)| (m, c.clone())),
        f.y_trunc(),
    )
    .truncate_y(y_order))
}

fn check_shape(spec: &RingSpec, residue: u32) -> Result<()> {
    if spec.d % 4 != residue || spec.zero_roots() != 1 {
        return Err(Error::InvalidArgument(format!(
            "ring with degree cap {} and {} roots is not a {} configuration",
            spec.d,
            spec.n_roots,
            if residue == 3 { "4k-1" } else { "4k+1" }
        )));
    }
    Ok(())
}

fn root_product(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    let yo = y_order_for(spec);
    let f = f_quotient(family, yo, spec.q_order)?;
    let mut acc = FormElement::one(spec);
    for j in 0..spec.n_roots {
        acc = acc.mul(&substitute(spec, &f, Gen::X(j))?)?;
    }
    Ok(acc)
}

/// Φ on a `4k−1` ring from the theta quotients; Φ_L carries `√2^{4k−1}`.
pub fn phi_theta_route(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    check_shape(spec, 3)?;
    let yo = y_order_for(spec);
    let uf = substitute(spec, &u_factor(family, yo, spec.q_order)?, Gen::U)?;
    let phi = root_product(family, spec)?.mul(&uf)?;
    Ok(match family {
        PhiFamily::L => phi.scale(&Scalar::sqrt2().pow(spec.d)),
        _ => phi,
    })
}

/// Φ̃ on a `4k+1` ring: prefactor `√2^{4k+1}/(π√−1)` for Φ̃_L and
/// `1/(2π√−1)` for Φ̃_W, Φ̃'_W.
pub fn phi_tilde_route(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    check_shape(spec, 1)?;
    let yo = y_order_for(spec);
    let uf = substitute(spec, &tilde_u_factor(family, yo, spec.q_order)?, Gen::U)?;
    let phi = root_product(family, spec)?.mul(&uf)?;
    // 1/√−1 = −ζ₈²
    let inv_i_pi = (-Scalar::i()).shift_pi(-1);
    let pref = match family {
        PhiFamily::L => &Scalar::sqrt2().pow(spec.d) * &inv_i_pi,
        _ => &Scalar::from_ratio(1, 2) * &inv_i_pi,
    };
    Ok(phi.scale(&pref))
}
