//! Φ forms assembled from Chern characters of the Witten bundles.
//!
//! For a reduced bundle `Ẽ = E − rk E` with Chern roots `±ω`,
//! `ch Λ_t(Ẽ) = Π (1 + e^{ω}t)(1 + e^{−ω}t)/(1+t)²` and `S_t = 1/Λ_{−t}`.
//! The tangent roots are `±2π√−1·x_j` (one extra zero root in odd dimension,
//! which cancels in every reduced factor) and the twist roots `±2π√−1·u`; in
//! `y = πx` the exponential is `e^{2√−1·y}`. Chern characters are
//! multiplicative, so each tensor factor is accumulated one root at a time.

use std::sync::Arc;

use super::{substitute, y_order_for, FormElement, Gen, RingSpec};
use crate::error::{Error, Result};
use crate::qseries::{QExpansion, EXACT};
use crate::scalars::Scalar;
use crate::theta::{PhiFamily, YSeries};

/// `(sign, numerator)` of a Witten parameter `±q^{n/8}`.
type Param = (i64, i64);

/// A reduced virtual bundle as `(x-multiplicity, u-multiplicity)`: every
/// tangent root pair appears `x` times and the twist pair `u` times.
#[derive(Clone, Copy)]
struct Virtual {
    x: i32,
    u: i32,
}

#[derive(Clone, Copy)]
enum Op {
    Lambda,
    Sym,
}

struct Builder {
    y_order: i64,
    cap: i64,
    e_plus: YSeries,
    e_minus: YSeries,
}

impl Builder {
    fn new(spec: &RingSpec) -> Self {
        let y_order = y_order_for(spec);
        let two_i = Scalar::i().scale_rational(&num_rational::BigRational::from_integer(2.into()));
        Builder {
            y_order,
            cap: spec.q_cap(),
            e_plus: YSeries::exp(&two_i, y_order),
            e_minus: YSeries::exp(&-two_i, y_order),
        }
    }

    /// `ch Λ_t` of one reduced root pair.
    fn lambda_pair(&self, (sign, n): Param) -> Result<YSeries> {
        let t = QExpansion::monomial(n, Scalar::from_int(sign));
        let one = YSeries::one(self.y_order);
        let a = &one + &self.e_plus.scale_q(&t);
        let b = &one + &self.e_minus.scale_q(&t);
        let denom = (&QExpansion::one() + &t).truncate(self.cap);
        let denom_inv = denom.inv()?;
        Ok(a.mul_to(&b, self.cap).scale_q(&(&denom_inv * &denom_inv)).truncate_q(self.cap))
    }

    /// `ch op_t` of one root pair raised to the multiplicity.
    fn pair_power(&self, op: Op, (sign, n): Param, mult: i32) -> Result<YSeries> {
        let (base, mult) = match op {
            Op::Lambda => (self.lambda_pair((sign, n))?, mult),
            Op::Sym => (self.lambda_pair((-sign, n))?, -mult),
        };
        let base = if mult < 0 { base.inv()? } else { base };
        let mut acc = YSeries::one(self.y_order).truncate_q(self.cap);
        for _ in 0..mult.unsigned_abs() {
            acc = acc.mul_to(&base, self.cap);
        }
        Ok(acc)
    }
}

/// Accumulates `Π_factors ch op_t(E)` on the ring, one generator at a time.
fn witten_product(
    spec: &Arc<RingSpec>,
    b: &Builder,
    factors: &[(Op, Param, Virtual)],
) -> Result<FormElement> {
    let mut acc = FormElement::one(spec);
    for &(op, t, v) in factors {
        if t.1 >= b.cap {
            continue;
        }
        if v.x != 0 {
            let f = b.pair_power(op, t, v.x)?;
            for j in 0..spec.n_roots {
                acc = acc.mul(&substitute(spec, &f, Gen::X(j))?)?;
            }
        }
        if v.u != 0 {
            acc = acc.mul(&substitute(spec, &b.pair_power(op, t, v.u)?, Gen::U)?)?;
        }
    }
    Ok(acc)
}

/// Witten factor list for `Θ_i(main, ξ)`, where `main` is `T` or `T + ξ`.
///
/// With `twisted = false` the second slot is the trivial `C²`, whose reduced
/// bundle vanishes.
fn theta_factors(family: PhiFamily, main: Virtual, twisted: bool, cap: i64) -> Vec<(Op, Param, Virtual)> {
    let xi = Virtual { x: 0, u: 1 };
    let zero = Virtual { x: 0, u: 0 };
    let (xi, mixed) = if twisted {
        (xi, Virtual { x: main.x, u: main.u - 2 })
    } else {
        (zero, main)
    };
    let mut out = Vec::new();
    let mut j = 1;
    while 8 * j - 4 < cap {
        let whole = 8 * j;
        let half = 8 * j - 4;
        out.push((Op::Sym, (1, whole), main));
        match family {
            PhiFamily::L => {
                out.push((Op::Lambda, (1, whole), mixed));
                out.push((Op::Lambda, (1, half), xi));
                out.push((Op::Lambda, (-1, half), xi));
            }
            PhiFamily::W => {
                out.push((Op::Lambda, (-1, half), mixed));
                out.push((Op::Lambda, (1, half), xi));
                out.push((Op::Lambda, (1, whole), xi));
            }
            PhiFamily::WPrime => {
                out.push((Op::Lambda, (1, half), mixed));
                out.push((Op::Lambda, (1, whole), xi));
                out.push((Op::Lambda, (-1, half), xi));
            }
        }
        j += 1;
    }
    out
}

/// Per-root characteristic series: `L̂` factor `2y/tan y`, `Â` factor
/// `y/sin y`, and `cosh(c/2)`, all from `e^{±√−1·y}`.
struct Hirzebruch {
    l_hat: YSeries,
    a_hat: YSeries,
    cosh_half: YSeries,
    /// `u / sinh(c/2)`, written in `y = πu`.
    u_over_sinh_half: YSeries,
}

impl Hirzebruch {
    fn new(y_order: i64) -> Result<Self> {
        let yw = y_order + 2;
        let ep = YSeries::exp(&Scalar::i(), yw);
        let em = YSeries::exp(&-Scalar::i(), yw);
        let cos = (&ep + &em).scale(&Scalar::from_ratio(1, 2));
        // sin y = (e^{iy} − e^{−iy})/(2i)
        let sin = (&ep - &em).scale(&(&Scalar::from_ratio(1, 2) * &-Scalar::i()));
        let y_over_sin = sin.inv()?.shift_y(1);
        let l_hat = (&y_over_sin * &cos).scale(&Scalar::from_int(2));
        // sinh(c/2) = sinh(π√−1u) = √−1·sin y and u = y/π
        let u_over_sinh_half = y_over_sin.scale(&(-Scalar::i()).shift_pi(-1));
        Ok(Hirzebruch {
            l_hat: l_hat.truncate_y(y_order),
            a_hat: y_over_sin.truncate_y(y_order),
            cosh_half: cos.truncate_y(y_order),
            u_over_sinh_half: u_over_sinh_half.truncate_y(y_order),
        })
    }
}

fn tangent_class(spec: &Arc<RingSpec>, per_root: &YSeries) -> Result<FormElement> {
    let mut acc = FormElement::one(spec);
    for j in 0..spec.n_roots {
        acc = acc.mul(&substitute(spec, per_root, Gen::X(j))?)?;
    }
    Ok(acc)
}

fn check_shape(spec: &RingSpec, residue: u32) -> Result<()> {
    if spec.d % 4 != residue || spec.zero_roots() != 1 {
        return Err(Error::InvalidArgument(format!(
            "ring with degree cap {} and {} roots does not fit this construction",
            spec.d, spec.n_roots
        )));
    }
    Ok(())
}

/// `Φ_L = L̂/cosh²(c/2)·chΘ₁`, `Φ_W = Â·cosh(c/2)·chΘ₂`, `Φ'_W = Â·cosh(c/2)·chΘ₃`
/// on a `4k−1` ring. `L̂` includes `√2` for the zero root.
pub fn phi_bundle_route(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    check_shape(spec, 3)?;
    let b = Builder::new(spec);
    let h = Hirzebruch::new(b.y_order)?;
    let tangent = Virtual { x: 1, u: 0 };
    let ch = witten_product(spec, &b, &theta_factors(family, tangent, true, b.cap))?;
    let cosh = substitute(spec, &h.cosh_half, Gen::U)?;
    let char_part = match family {
        PhiFamily::L => {
            let inv = cosh.inv()?;
            tangent_class(spec, &h.l_hat)?
                .mul(&inv.mul(&inv)?)?
                .scale(&Scalar::sqrt2().pow(spec.zero_roots()))
        }
        _ => tangent_class(spec, &h.a_hat)?.mul(&cosh)?,
    };
    char_part.mul(&ch)
}

/// Tilde forms on a `4k+1` ring from `Θ_i(T+ξ, C²)` and `Θ_i(T+ξ, ξ)`:
///
/// * `Φ̃_L = L̂·cosh/sinh(c/2)·(chΘ₁(·,C²) − chΘ₁(·,ξ)/cosh²(c/2))`;
/// * `Φ̃_W = Â/(2 sinh(c/2))·(chΘ₂(·,C²) − cosh(c/2)·chΘ₂(·,ξ))`, same for Φ̃'_W.
///
/// The bracket is divisible by `u`; it is formed in a ring widened by one
/// degree step, divided by `u`, multiplied by `u/sinh(c/2)` and cut back.
pub fn phi_tilde_bundle_route(family: PhiFamily, spec: &Arc<RingSpec>) -> Result<FormElement> {
    check_shape(spec, 1)?;
    let wide = Arc::new(spec.widened(2));
    let b = Builder::new(&wide);
    let h = Hirzebruch::new(b.y_order)?;
    let main = Virtual { x: 1, u: 1 };
    let p_trivial = witten_product(&wide, &b, &theta_factors(family, main, false, b.cap))?;
    let p_twisted = witten_product(&wide, &b, &theta_factors(family, main, true, b.cap))?;
    let cosh = substitute(&wide, &h.cosh_half, Gen::U)?;
    let u_over_sinh = substitute(&wide, &h.u_over_sinh_half, Gen::U)?;
    let out = match family {
        PhiFamily::L => {
            // cosh/sinh·(P₁ − P₂/cosh²) = (cosh²P₁ − P₂)/u · u/sinh · 1/cosh
            let n = cosh.mul(&cosh)?.mul(&p_trivial)?.sub(&p_twisted)?;
            tangent_class(&wide, &h.l_hat)?
                .mul(&n.div_by_generator(Gen::U)?)?
                .mul(&u_over_sinh)?
                .mul(&cosh.inv()?)?
                .scale(&Scalar::sqrt2().pow(spec.zero_roots()))
        }
        _ => {
            let n = p_trivial.sub(&cosh.mul(&p_twisted)?)?;
            tangent_class(&wide, &h.a_hat)?
                .mul(&n.div_by_generator(Gen::U)?)?
                .mul(&u_over_sinh)?
                .scale(&Scalar::from_ratio(1, 2))
        }
    };
    out.restrict_to(spec).map(|e| e.truncate_q(EXACT))
}
