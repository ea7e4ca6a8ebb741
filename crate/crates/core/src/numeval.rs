//! Floating-point evaluation of theta functions and modular forms, used for
//! the S-transformation laws that truncated q-series cannot express and as
//! an independent oracle for the exact kernel.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::modforms::{delta, epsilon};
use crate::theta::{theta_expand, ThetaFamily};

type C = Complex64;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

const I: C = C::new(0.0, 1.0);

/// Sample points and tolerances for numerical checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EvalConfig {
    /// Number of factors kept in each infinite product.
    pub product_terms: usize,
    #[serde(serialize_with = "ser_complex_vec")]
    pub tau_samples: Vec<C>,
    #[serde(serialize_with = "ser_complex_vec")]
    pub v_samples: Vec<C>,
    pub tol: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            product_terms: 40,
            tau_samples: vec![c(0.0, 1.1), c(0.3, 1.2), c(-0.4, 0.9)],
            v_samples: vec![c(0.3, 0.1), c(0.17, 0.05), c(-0.21, 0.08)],
            tol: 1e-9,
        }
    }
}

impl EvalConfig {
    /// Rejects τ samples below the `Im τ ≥ 0.5` floor.
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tau_samples.iter().find(|t| t.im < 0.5) {
            return Err(Error::Domain(format!("tau sample {t} has Im < 0.5")));
        }
        if self.product_terms == 0 {
            return Err(Error::InvalidArgument("product_terms must be positive".into()));
        }
        Ok(())
    }
}

fn check_tau(tau: C) -> Result<()> {
    if tau.im <= 0.0 {
        return Err(Error::Domain(format!("Im(tau) must be positive, got {}", tau.im)));
    }
    Ok(())
}

/// `(s, a)` for the factor pair `(1 + s·e^{2πiv}q^a)(1 + s·e^{−2πiv}q^a)`:
/// `s = ∓1`, `a = j` or `j − ½`.
fn factor_shape(family: ThetaFamily) -> (f64, f64) {
    match family {
        ThetaFamily::Theta => (-1.0, 0.0),
        ThetaFamily::Theta1 => (1.0, 0.0),
        ThetaFamily::Theta2 => (-1.0, 0.5),
        ThetaFamily::Theta3 => (1.0, 0.5),
    }
}

/// `(F, F')` with `F = pre(v)·Π factors`, derivative from the log-derivative sum.
fn theta_and_deriv(family: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    check_tau(tau)?;
    let (s, shift) = factor_shape(family);
    let e = (2.0 * PI * I * v).exp();
    let einv = 1.0 / e;
    let mut prod = c(1.0, 0.0);
    let mut log_d = c(0.0, 0.0);
    for j in 1..=cfg.product_terms {
        let j = j as f64;
        let qj = (2.0 * PI * I * tau * j).exp();
        let qa = (2.0 * PI * I * tau * (j - shift)).exp();
        let fp = 1.0 + s * e * qa;
        let fm = 1.0 + s * einv * qa;
        prod *= (1.0 - qj) * fp * fm;
        log_d += 2.0 * PI * I * s * qa * (e / fp - einv / fm);
    }
    let q8 = (PI * I * tau / 4.0).exp();
    let (pre, pre_d) = match family {
        ThetaFamily::Theta => (2.0 * q8 * (PI * v).sin(), 2.0 * q8 * PI * (PI * v).cos()),
        ThetaFamily::Theta1 => (2.0 * q8 * (PI * v).cos(), -2.0 * q8 * PI * (PI * v).sin()),
        _ => (c(1.0, 0.0), c(0.0, 0.0)),
    };
    Ok((pre * prod, pre_d * prod + pre * prod * log_d))
}

/// Truncated product value of a theta function.
pub fn theta_eval(family: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<C> {
    Ok(theta_and_deriv(family, v, tau, cfg)?.0)
}

/// `∂θ/∂v`, differentiating the product analytically.
pub fn theta_deriv_eval(family: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<C> {
    Ok(theta_and_deriv(family, v, tau, cfg)?.1)
}

/// `θ'/θ` at `v`.
pub fn log_deriv_eval(family: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<C> {
    let (f, d) = theta_and_deriv(family, v, tau, cfg)?;
    Ok(d / f)
}

/// `(τ/√−1)^{1/2}` on the principal branch.
pub fn sqrt_tau_over_i(tau: C) -> C {
    (tau / I).sqrt()
}

/// `|lhs − rhs| / max(1, |rhs|)`.
pub fn residual(lhs: C, rhs: C) -> f64 {
    (lhs - rhs).norm() / rhs.norm().max(1.0)
}

fn ser_complex<S: Serializer>(z: &C, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

fn ser_opt_complex<S: Serializer>(z: &Option<C>, s: S) -> std::result::Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

fn ser_complex_vec<S: Serializer>(zs: &[C], s: S) -> std::result::Result<S::Ok, S::Error> {
    zs.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>().serialize(s)
}

/// One evaluated sample of a law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sample {
    #[serde(serialize_with = "ser_opt_complex")]
    pub v: Option<C>,
    #[serde(serialize_with = "ser_complex")]
    pub tau: C,
    #[serde(serialize_with = "ser_complex")]
    pub lhs: C,
    #[serde(serialize_with = "ser_complex")]
    pub rhs: C,
    pub residual: f64,
}

/// Residuals of one identity over all samples.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub law_id: String,
    pub anchor: String,
    pub samples: Vec<Sample>,
    pub max_residual: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn new(law_id: &str, anchor: &str, samples: Vec<Sample>, tol: f64) -> Self {
        let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
        ResidualReport {
            law_id: law_id.to_string(),
            anchor: anchor.to_string(),
            pass: max_residual < tol && max_residual.is_finite(),
            samples,
            max_residual,
        }
    }
}

type Law = fn(C, C, &EvalConfig) -> Result<(C, C)>;

fn run_vt(law_id: &str, anchor: &str, cfg: &EvalConfig, f: Law) -> Result<ResidualReport> {
    let mut samples = Vec::new();
    for &tau in &cfg.tau_samples {
        for &v in &cfg.v_samples {
            let (lhs, rhs) = f(v, tau, cfg)?;
            samples.push(Sample { v: Some(v), tau, lhs, rhs, residual: residual(lhs, rhs) });
        }
    }
    Ok(ResidualReport::new(law_id, anchor, samples, cfg.tol))
}

fn run_t(law_id: &str, anchor: &str, cfg: &EvalConfig, f: fn(C, &EvalConfig) -> Result<(C, C)>) -> Result<ResidualReport> {
    let mut samples = Vec::new();
    for &tau in &cfg.tau_samples {
        let (lhs, rhs) = f(tau, cfg)?;
        samples.push(Sample { v: None, tau, lhs, rhs, residual: residual(lhs, rhs) });
    }
    Ok(ResidualReport::new(law_id, anchor, samples, cfg.tol))
}

/// Theta family on the right of the S-law, and whether the `1/√−1` factor appears.
fn s_partner(f: ThetaFamily) -> (ThetaFamily, bool) {
    match f {
        ThetaFamily::Theta => (ThetaFamily::Theta, true),
        ThetaFamily::Theta1 => (ThetaFamily::Theta2, false),
        ThetaFamily::Theta2 => (ThetaFamily::Theta1, false),
        ThetaFamily::Theta3 => (ThetaFamily::Theta3, false),
    }
}

fn s_factor(f: ThetaFamily, v: C, tau: C) -> C {
    let (_, inv_i) = s_partner(f);
    let k = sqrt_tau_over_i(tau) * (PI * I * tau * v * v).exp();
    if inv_i {
        k / I
    } else {
        k
    }
}

fn s_value(f: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    let lhs = theta_eval(f, v, -1.0 / tau, cfg)?;
    let (g, _) = s_partner(f);
    Ok((lhs, s_factor(f, v, tau) * theta_eval(g, tau * v, tau, cfg)?))
}

fn s_deriv(f: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    let lhs = theta_deriv_eval(f, v, -1.0 / tau, cfg)?;
    let (g, _) = s_partner(f);
    let (gv, gd) = theta_and_deriv(g, tau * v, tau, cfg)?;
    let inner = 2.0 * PI * I * tau * v * gv + tau * gd;
    Ok((lhs, s_factor(f, v, tau) * inner))
}

macro_rules! law {
    ($name:ident, $body:expr, $fam:expr) => {
        fn $name(v: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
            $body($fam, v, tau, cfg)
        }
    };
}

law!(s_theta, s_value, ThetaFamily::Theta);
law!(s_theta1, s_value, ThetaFamily::Theta1);
law!(s_theta2, s_value, ThetaFamily::Theta2);
law!(s_theta3, s_value, ThetaFamily::Theta3);
law!(sd_theta, s_deriv, ThetaFamily::Theta);
law!(sd_theta1, s_deriv, ThetaFamily::Theta1);
law!(sd_theta2, s_deriv, ThetaFamily::Theta2);
law!(sd_theta3, s_deriv, ThetaFamily::Theta3);

fn s_theta_prime_zero(tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    let zero = c(0.0, 0.0);
    let lhs = theta_deriv_eval(ThetaFamily::Theta, zero, -1.0 / tau, cfg)?;
    let rhs = sqrt_tau_over_i(tau) / I * tau * theta_deriv_eval(ThetaFamily::Theta, zero, tau, cfg)?;
    Ok((lhs, rhs))
}

const MODFORM_Q_ORDER: i64 = 12;

fn s_delta(tau: C, _: &EvalConfig) -> Result<(C, C)> {
    let s = delta(2, MODFORM_Q_ORDER)?.series;
    let t = delta(1, MODFORM_Q_ORDER)?.series;
    Ok((s.eval(-1.0 / tau)?.0, tau * tau * t.eval(tau)?.0))
}

fn s_epsilon(tau: C, _: &EvalConfig) -> Result<(C, C)> {
    let s = epsilon(2, MODFORM_Q_ORDER)?.series;
    let t = epsilon(1, MODFORM_Q_ORDER)?.series;
    Ok((s.eval(-1.0 / tau)?.0, tau.powi(4) * t.eval(tau)?.0))
}

fn jacobi(tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    let zero = c(0.0, 0.0);
    let lhs = theta_deriv_eval(ThetaFamily::Theta, zero, tau, cfg)?;
    let rhs = PI
        * theta_eval(ThetaFamily::Theta1, zero, tau, cfg)?
        * theta_eval(ThetaFamily::Theta2, zero, tau, cfg)?
        * theta_eval(ThetaFamily::Theta3, zero, tau, cfg)?;
    Ok((lhs, rhs))
}

/// `θ'(0,τ) = π·θ₁(0,τ)θ₂(0,τ)θ₃(0,τ)` at the configured τ samples.
pub fn check_jacobi(cfg: &EvalConfig) -> Result<ResidualReport> {
    run_t("jacobi-numeric", "θ'(0,τ) = π θ₁(0,τ) θ₂(0,τ) θ₃(0,τ)", cfg, jacobi)
}

/// S-transformation laws of the theta functions, their derivatives, `θ'(0)`
/// and the weight-2 and weight-4 generators.
pub fn check_s_laws(cfg: &EvalConfig) -> Result<Vec<ResidualReport>> {
    cfg.validate()?;
    let pairs: [(&str, &str, Law); 8] = [
        ("theta-S", "θ(v,−1/τ) = (1/√−1)(τ/√−1)^½ e^{πiτv²} θ(τv,τ)", s_theta),
        ("theta1-S", "θ₁(v,−1/τ) = (τ/√−1)^½ e^{πiτv²} θ₂(τv,τ)", s_theta1),
        ("theta2-S", "θ₂(v,−1/τ) = (τ/√−1)^½ e^{πiτv²} θ₁(τv,τ)", s_theta2),
        ("theta3-S", "θ₃(v,−1/τ) = (τ/√−1)^½ e^{πiτv²} θ₃(τv,τ)", s_theta3),
        ("theta-prime-S", "θ'(v,−1/τ) = (1/√−1)(τ/√−1)^½ e^{πiτv²}(2πiτv θ(τv,τ) + τθ'(τv,τ))", sd_theta),
        ("theta1-prime-S", "θ₁'(v,−1/τ) = (τ/√−1)^½ e^{πiτv²}(2πiτv θ₂(τv,τ) + τθ₂'(τv,τ))", sd_theta1),
        ("theta2-prime-S", "θ₂'(v,−1/τ) = (τ/√−1)^½ e^{πiτv²}(2πiτv θ₁(τv,τ) + τθ₁'(τv,τ))", sd_theta2),
        ("theta3-prime-S", "θ₃'(v,−1/τ) = (τ/√−1)^½ e^{πiτv²}(2πiτv θ₃(τv,τ) + τθ₃'(τv,τ))", sd_theta3),
    ];
    let mut out = Vec::new();
    for (id, anchor, f) in pairs {
        out.push(run_vt(id, anchor, cfg, f)?);
    }
    out.push(run_t("theta-prime-zero-S", "θ'(0,−1/τ) = (1/√−1)(τ/√−1)^½ τ θ'(0,τ)", cfg, s_theta_prime_zero)?);
    out.push(run_t("delta-S", "δ₂(−1/τ) = τ² δ₁(τ)", cfg, s_delta)?);
    out.push(run_t("epsilon-S", "ε₂(−1/τ) = τ⁴ ε₁(τ)", cfg, s_epsilon)?);
    Ok(out)
}

fn th(f: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<C> {
    theta_eval(f, v, tau, cfg)
}

fn ld(f: ThetaFamily, v: C, tau: C, cfg: &EvalConfig) -> Result<C> {
    log_deriv_eval(f, v, tau, cfg)
}

fn phi_quotient(z: C, tau: C, cfg: &EvalConfig) -> Result<C> {
    use ThetaFamily::*;
    let zero = c(0.0, 0.0);
    Ok(z * theta_deriv_eval(Theta, zero, tau, cfg)? / th(Theta, z, tau, cfg)? * th(Theta1, z, tau, cfg)?
        / th(Theta1, zero, tau, cfg)?)
}

fn quotient_law(z: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    use ThetaFamily::*;
    let zero = c(0.0, 0.0);
    let s = -1.0 / tau;
    let lhs = phi_quotient(z, s, cfg)?;
    let tz = tau * z;
    let rhs = tz * theta_deriv_eval(Theta, zero, tau, cfg)? / th(Theta, tz, tau, cfg)? * th(Theta2, tz, tau, cfg)?
        / th(Theta2, zero, tau, cfg)?;
    Ok((lhs, rhs))
}

fn tangent_combo_law(z: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    use ThetaFamily::*;
    let s = -1.0 / tau;
    let lhs = 1.0 / z - ld(Theta, z, s, cfg)? + ld(Theta1, z, s, cfg)?;
    let tz = tau * z;
    let rhs = tau * (1.0 / tz - ld(Theta, tz, tau, cfg)? + ld(Theta2, tz, tau, cfg)?);
    Ok((lhs, rhs))
}

fn u_factor_law(u: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    use ThetaFamily::*;
    let zero = c(0.0, 0.0);
    let s = -1.0 / tau;
    let r = |f, x, t| -> Result<C> { Ok(th(f, x, t, cfg)? / th(f, zero, t, cfg)?) };
    let a = r(Theta1, u, s)?;
    let lhs = r(Theta3, u, s)? * r(Theta2, u, s)? / (a * a);
    let tu = tau * u;
    let b = r(Theta2, tu, tau)?;
    let rhs = r(Theta3, tu, tau)? * r(Theta1, tu, tau)? / (b * b);
    Ok((lhs, rhs))
}

fn twist_combo_law(z: C, tau: C, cfg: &EvalConfig) -> Result<(C, C)> {
    use ThetaFamily::*;
    let s = -1.0 / tau;
    let lhs = ld(Theta2, z, s, cfg)? + ld(Theta3, z, s, cfg)? - 2.0 * ld(Theta1, z, s, cfg)?;
    let tz = tau * z;
    let rhs = tau * (ld(Theta1, tz, tau, cfg)? + ld(Theta3, tz, tau, cfg)? - 2.0 * ld(Theta2, tz, tau, cfg)?);
    Ok((lhs, rhs))
}

/// S-laws of the quotients and log-derivative combinations that enter the
/// Φ forms and their transgressions.
pub fn check_quotient_s_laws(cfg: &EvalConfig) -> Result<Vec<ResidualReport>> {
    cfg.validate()?;
    let laws: [(&str, &str, Law); 4] = [
        (
            "root-quotient-S",
            "zθ'(0,−1/τ)/θ(z,−1/τ)·θ₁(z,−1/τ)/θ₁(0,−1/τ) = τzθ'(0,τ)/θ(τz,τ)·θ₂(τz,τ)/θ₂(0,τ)",
            quotient_law,
        ),
        (
            "tangent-combo-S",
            "1/z − θ'/θ + θ₁'/θ₁ at (z,−1/τ) = τ(1/τz − θ'/θ + θ₂'/θ₂) at (τz,τ)",
            tangent_combo_law,
        ),
        (
            "u-factor-S",
            "θ₁²(0)/θ₁²(u)·θ₃(u)/θ₃(0)·θ₂(u)/θ₂(0) at −1/τ = θ₂²(0)/θ₂²(τu)·θ₃(τu)/θ₃(0)·θ₁(τu)/θ₁(0) at τ",
            u_factor_law,
        ),
        (
            "twist-combo-S",
            "θ₂'/θ₂ + θ₃'/θ₃ − 2θ₁'/θ₁ at (z,−1/τ) = τ(θ₁'/θ₁ + θ₃'/θ₃ − 2θ₂'/θ₂) at (τz,τ)",
            twist_combo_law,
        ),
    ];
    let mut out = Vec::new();
    for (id, anchor, f) in laws {
        out.push(run_vt(id, anchor, cfg, f)?);
    }
    Ok(out)
}

/// Exact kernel versus product evaluation for one family.
///
/// The exact value is `Σ_m q_eval(c_m)(πv)^m` at `y_order` and `q_order`.
/// The bound adds the q-tail estimate to the change from dropping the top
/// four y-degrees.
pub fn oracle_agreement(family: ThetaFamily, y_order: i64, q_order: i64, cfg: &EvalConfig) -> Result<ResidualReport> {
    let series = theta_expand(family, y_order, q_order);
    let coarse = series.truncate_y(y_order - 4);
    let mut samples = Vec::new();
    let mut worst_gap = 0.0f64;
    for &tau in &cfg.tau_samples {
        for &v in &cfg.v_samples {
            let (exact, q_tail) = series.eval(v, tau)?;
            let (rough, _) = coarse.eval(v, tau)?;
            let bound = q_tail + (exact - rough).norm();
            let numeric = theta_eval(family, v, tau, cfg)?;
            let r = residual(exact, numeric);
            worst_gap = worst_gap.max(r - bound);
            samples.push(Sample { v: Some(v), tau, lhs: exact, rhs: numeric, residual: r });
        }
    }
    let tol = 1e-8;
    let mut report = ResidualReport::new(
        &format!("oracle-{}", family.name()),
        "exact y/q expansion evaluated numerically = truncated product",
        samples,
        tol,
    );
    report.pass &= worst_gap < tol;
    Ok(report)
}

/// Estimates the `q¹` coefficient of `δ₁` from product values at small `q`
/// with one Richardson step.
pub fn delta1_q_coefficient(cfg: &EvalConfig) -> Result<f64> {
    let zero = c(0.0, 0.0);
    let d1 = |t: f64| -> Result<(f64, f64)> {
        let tau = c(0.0, t);
        let q = (-2.0 * PI * t).exp();
        let t2 = theta_eval(ThetaFamily::Theta2, zero, tau, cfg)?;
        let t3 = theta_eval(ThetaFamily::Theta3, zero, tau, cfg)?;
        let d = (t2.powi(4) + t3.powi(4)) / 8.0;
        Ok(((d.re - 0.25) / q, q))
    };
    // q = 1e-4 and q = 5e-5
    let t1 = (1e4f64).ln() / (2.0 * PI);
    let t2 = (2e4f64).ln() / (2.0 * PI);
    let (f1, _) = d1(t1)?;
    let (f2, _) = d1(t2)?;
    Ok(2.0 * f2 - f1)
}
