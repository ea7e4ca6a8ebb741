//! Named verification suites and the report they produce.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::cancel::{derive, CancellationCase, CancellationReport, CaseId};
use crate::charring::{phi_bundle_route, phi_theta_route, phi_tilde_bundle_route, phi_tilde_route, FormElement, RingSpec};
use crate::error::{Error, Result};
use crate::modforms::{delta, epsilon, t_transform, ModularForm};
use crate::numeval::{self, EvalConfig, ResidualReport};
use crate::qseries::QExpansion;
use crate::scalars::Scalar;
use crate::theta::{
    f_quotient, log_derivative, logderiv_combo, theta_expand, theta_nullwert, theta_prime, theta_prime_zero, ComboKind,
    Parity, PhiFamily, ThetaFamily, YSeries,
};
use crate::transgress::{check_t_law, dim3_twist_coefficient, CsKind, CsVariant};

/// A verification suite tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SuiteId {
    ThetaBasics,
    Jacobi,
    TLaws,
    SLaws,
    ModformFourier,
    RouteCrosscheck,
    CsTLaws,
    Dim3Special,
    Cancel(CaseId),
    All,
}

impl SuiteId {
    /// Every suite except `all`, in report order.
    pub const MEMBERS: [SuiteId; 11] = [
        SuiteId::ThetaBasics,
        SuiteId::Jacobi,
        SuiteId::TLaws,
        SuiteId::SLaws,
        SuiteId::ModformFourier,
        SuiteId::RouteCrosscheck,
        SuiteId::CsTLaws,
        SuiteId::Dim3Special,
        SuiteId::Cancel(CaseId::Tm11),
        SuiteId::Cancel(CaseId::Xi11),
        SuiteId::Cancel(CaseId::Tilde9),
    ];

    pub fn tag(self) -> String {
        match self {
            SuiteId::ThetaBasics => "theta-basics".into(),
            SuiteId::Jacobi => "jacobi".into(),
            SuiteId::TLaws => "t-laws".into(),
            SuiteId::SLaws => "s-laws".into(),
            SuiteId::ModformFourier => "modform-fourier".into(),
            SuiteId::RouteCrosscheck => "route-crosscheck".into(),
            SuiteId::CsTLaws => "cs-t-laws".into(),
            SuiteId::Dim3Special => "dim3-special".into(),
            SuiteId::Cancel(c) => format!("cancel-{c}"),
            SuiteId::All => "all".into(),
        }
    }

    /// q-order used when none is given.
    pub fn default_q_order(self) -> i64 {
        match self {
            SuiteId::Cancel(_) => 4,
            _ => 6,
        }
    }
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

impl FromStr for SuiteId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.starts_with("cancel-") {
            return Ok(SuiteId::Cancel(s.parse()?));
        }
        if s == "all" {
            return Ok(SuiteId::All);
        }
        SuiteId::MEMBERS
            .into_iter()
            .find(|id| id.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

impl Serialize for SuiteId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.tag())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Truncation orders a check ran at.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Orders {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_order: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

impl Orders {
    fn q(q: i64) -> Self {
        Orders { q_order: Some(q), ..Default::default() }
    }

    fn qy(q: i64, y: i64) -> Self {
        Orders { q_order: Some(q), y_order: Some(y), k: None }
    }

    fn qk(q: i64, k: u32) -> Self {
        Orders { q_order: Some(q), y_order: None, k: Some(k) }
    }
}

impl fmt::Display for Orders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(q) = self.q_order {
            parts.push(format!("q={q}"));
        }
        if let Some(y) = self.y_order {
            parts.push(format!("y={y}"));
        }
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        f.write_str(&parts.join(" "))
    }
}

/// One line of a [`VerificationReport`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub id: String,
    /// The identity being checked, written out.
    pub anchor: String,
    pub status: Status,
    pub detail: String,
    pub orders: Orders,
}

impl Check {
    fn new(id: impl Into<String>, anchor: impl Into<String>, ok: bool, detail: impl Into<String>, orders: Orders) -> Self {
        Check {
            id: id.into(),
            anchor: anchor.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            orders,
        }
    }

    fn exact(id: impl Into<String>, anchor: impl Into<String>, ok: bool, orders: Orders) -> Self {
        let detail = if ok { "exact" } else { "mismatch" };
        Check::new(id, anchor, ok, detail, orders)
    }

    fn numeric(r: &ResidualReport, tol: f64) -> Self {
        Check::new(
            r.law_id.clone(),
            r.anchor.clone(),
            r.pass,
            format!("max residual {:.3e} (tol {tol:e}, {} samples)", r.max_residual, r.samples.len()),
            Orders::default(),
        )
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Result of running one suite.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub suite: SuiteId,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub residuals: Vec<ResidualReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cancellation: Option<CancellationReport>,
}

impl VerificationReport {
    fn new(suite: SuiteId, checks: Vec<Check>) -> Self {
        let pass = checks.iter().all(Check::passed);
        VerificationReport { suite, checks, pass, residuals: Vec::new(), cancellation: None }
    }
}

/// Overrides for a suite run. `None` means the suite default.
#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub q_order: Option<i64>,
    pub y_order: Option<i64>,
    pub k: Option<u32>,
    pub eval: EvalConfig,
}

const DEFAULT_Y_ORDER: i64 = 8;
const DEFAULT_K: u32 = 2;

/// Runs one suite. Usage errors such as a too-small order are returned as
/// `Err`; failed identities come back as failed checks.
pub fn run_suite(id: SuiteId, opts: &SuiteOptions) -> Result<VerificationReport> {
    let q = opts.q_order.unwrap_or(id.default_q_order());
    if q < 1 {
        return Err(Error::InsufficientOrder(format!("q-order must be at least 1, got {q}")));
    }
    let y = opts.y_order.unwrap_or(DEFAULT_Y_ORDER);
    if y < 2 {
        return Err(Error::InsufficientOrder(format!("y-order must be at least 2, got {y}")));
    }
    let k = opts.k.unwrap_or(DEFAULT_K);
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    match id {
        SuiteId::ThetaBasics => theta_basics(q, y),
        SuiteId::Jacobi => jacobi(q, &opts.eval),
        SuiteId::TLaws => t_laws(q, y, k),
        SuiteId::SLaws => s_laws(&opts.eval),
        SuiteId::ModformFourier => modform_fourier(q, &opts.eval),
        SuiteId::RouteCrosscheck => route_crosscheck(),
        SuiteId::CsTLaws => cs_t_laws(q, k),
        SuiteId::Dim3Special => dim3_special(q),
        SuiteId::Cancel(c) => cancellation(c, q),
        SuiteId::All => all(opts),
    }
}

fn all(opts: &SuiteOptions) -> Result<VerificationReport> {
    let results: Vec<Result<VerificationReport>> =
        SuiteId::MEMBERS.par_iter().map(|&id| run_suite(id, opts)).collect();
    let mut checks = Vec::new();
    for r in results {
        let r = r?;
        for mut c in r.checks {
            c.id = format!("{}/{}", r.suite, c.id);
            checks.push(c);
        }
    }
    Ok(VerificationReport::new(SuiteId::All, checks))
}

fn theta_basics(q: i64, y: i64) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let o = Orders::qy(q, y);
    let th = theta_expand(ThetaFamily::Theta, y, q);
    let c1 = th.coeff(1);
    checks.push(Check::exact(
        "theta-leading",
        "θ(v,τ) = 2q^{1/8}·πv + …",
        c1.valuation() == 1 && c1.coeff(1) == Scalar::from_int(2),
        o,
    ));
    let t2 = theta_nullwert(ThetaFamily::Theta2, q);
    checks.push(Check::exact(
        "theta2-nullwert",
        "θ₂(0,τ) = 1 − 2q^{1/2} + O(q)",
        t2.coeff(0) == Scalar::one() && t2.coeff(4) == Scalar::from_int(-2),
        Orders::q(q),
    ));
    for f in ThetaFamily::ALL {
        let s = theta_expand(f, y, q);
        let want = if f == ThetaFamily::Theta { Parity::Odd } else { Parity::Even };
        checks.push(parity_check(&format!("parity-{f}"), &format!("{f} has parity {want:?}"), &s, want, o));
    }
    for fam in PhiFamily::ALL {
        let s = f_quotient(fam, y, q)?;
        checks.push(parity_check(&format!("parity-quotient-{fam}"), "root quotient is even", &s, Parity::Even, o));
        for kind in [ComboKind::Tangent, ComboKind::Twist] {
            let kind_name = if kind == ComboKind::Tangent { "tangent" } else { "twist" };
            let id = format!("parity-{kind_name}-combo-{fam}");
            match logderiv_combo(kind, fam, y, q) {
                Ok(s) => checks.push(parity_check(&id, "log-derivative combination is odd and regular", &s, Parity::Odd, o)),
                Err(e) => checks.push(Check::new(id, "log-derivative combination is odd and regular", false, e.to_string(), o)),
            }
        }
    }
    let ld = log_derivative(ThetaFamily::Theta, y, q)?;
    let residue = ld.coeff(-1);
    checks.push(Check::exact(
        "log-derivative-residue",
        "θ'/θ = 1/z + regular",
        ld.valuation() == -1 && (&residue - &QExpansion::constant(Scalar::pi_pow(1))).is_zero(),
        o,
    ));
    Ok(VerificationReport::new(SuiteId::ThetaBasics, checks))
}

/// `Phi_W` or `PhiTilde_W`.
fn phi_label(fam: PhiFamily, tilde: bool) -> String {
    if tilde {
        fam.name().replace("Phi_", "PhiTilde_")
    } else {
        fam.name().to_string()
    }
}

fn parity_check(id: &str, anchor: &str, s: &YSeries, want: Parity, o: Orders) -> Check {
    let ok = s.parity() == want && s.parity_consistent() && s.scan_parity() == want;
    Check::new(id, anchor, ok, format!("tag {:?}, scan {:?}", s.parity(), s.scan_parity()), o)
}

fn jacobi(q: i64, cfg: &EvalConfig) -> Result<VerificationReport> {
    let lhs = theta_prime_zero(q);
    let rhs = (&(&theta_nullwert(ThetaFamily::Theta1, q) * &theta_nullwert(ThetaFamily::Theta2, q))
        * &theta_nullwert(ThetaFamily::Theta3, q))
        .shift_pi(1);
    let diff = &lhs - &rhs;
    let ok = diff.is_zero() && diff.trunc() >= 8 * q;
    let mut checks = vec![Check::exact("jacobi-exact", "θ'(0,τ) = π θ₁(0,τ) θ₂(0,τ) θ₃(0,τ)", ok, Orders::q(q))];
    let numeric = numeval::check_jacobi(cfg)?;
    checks.push(Check::numeric(&numeric, 1e-12));
    let mut r = VerificationReport::new(SuiteId::Jacobi, checks);
    r.residuals.push(numeric);
    Ok(r)
}

fn series_t_law(f: ThetaFamily, s: impl Fn(ThetaFamily) -> YSeries) -> bool {
    let (img, zeta) = f.t_image();
    s(f).tau_shift().agrees_with(&s(img).scale(&Scalar::zeta8_pow(zeta)))
}

fn form_t_law(f: &ModularForm, target: &ModularForm) -> bool {
    (&t_transform(f).series - &target.series).is_zero()
}

fn t_laws(q: i64, y: i64, k: u32) -> Result<VerificationReport> {
    let mut checks = Vec::new();
    let o = Orders::qy(q, y);
    for f in ThetaFamily::ALL {
        let (img, z) = f.t_image();
        let anchor = format!("{f}(v,τ+1) = ζ₈^{z}·{img}(v,τ)");
        checks.push(Check::exact(format!("{f}-T"), anchor, series_t_law(f, |g| theta_expand(g, y, q)), o));
        let anchor = format!("{f}'(v,τ+1) = ζ₈^{z}·{img}'(v,τ)");
        let ok = series_t_law(f, |g| theta_prime(&theta_expand(g, y, q)));
        checks.push(Check::exact(format!("{f}-prime-T"), anchor, ok, o));
    }
    let forms = [(delta as fn(u8, i64) -> Result<ModularForm>, "delta"), (epsilon, "epsilon")];
    for (build, name) in forms {
        for (i, j) in [(1u8, 1u8), (2, 3), (3, 2)] {
            let ok = form_t_law(&build(i, q)?, &build(j, q)?);
            let anchor = format!("{name}{i}(τ+1) = {name}{j}(τ)");
            checks.push(Check::exact(format!("{name}{i}-T"), anchor, ok, Orders::q(q)));
        }
    }
    let tm = Arc::new(RingSpec::tm(k, q));
    let tilde = Arc::new(RingSpec::tilde(k, q));
    let phis: Vec<(PhiFamily, bool)> =
        PhiFamily::ALL.iter().flat_map(|&f| [(f, false), (f, true)]).collect();
    let phi_checks: Vec<Result<Check>> = phis
        .par_iter()
        .map(|&(fam, is_tilde)| {
            let (build, spec): (fn(PhiFamily, &Arc<RingSpec>) -> Result<FormElement>, _) = if is_tilde {
                (phi_tilde_route, &tilde)
            } else {
                (phi_theta_route, &tm)
            };
            let ok = build(fam, spec)?.tau_shift().agrees_with(&build(fam.t_image(), spec)?)?;
            let (a, b) = (phi_label(fam, is_tilde), phi_label(fam.t_image(), is_tilde));
            Ok(Check::exact(format!("{a}-T"), format!("{a}(τ+1) = {b}(τ)"), ok, Orders::qk(q, k)))
        })
        .collect();
    for c in phi_checks {
        checks.push(c?);
    }
    Ok(VerificationReport::new(SuiteId::TLaws, checks))
}

fn s_laws(cfg: &EvalConfig) -> Result<VerificationReport> {
    let mut reports = numeval::check_s_laws(cfg)?;
    reports.extend(numeval::check_quotient_s_laws(cfg)?);
    for f in ThetaFamily::ALL {
        reports.push(numeval::oracle_agreement(f, 24, 5, cfg)?);
    }
    let checks = reports
        .iter()
        .map(|r| {
            let tol = if r.law_id.starts_with("oracle") { 1e-8 } else { cfg.tol };
            let mut c = Check::numeric(r, tol);
            if r.law_id.starts_with("oracle") {
                c.orders = Orders::qy(5, 24);
            }
            c
        })
        .collect();
    let mut r = VerificationReport::new(SuiteId::SLaws, checks);
    r.residuals = reports;
    Ok(r)
}

/// The leading Fourier coefficients of the six generators as
/// `(name, [(eighths, numerator, denominator)])`.
pub const FOURIER_FIXTURES: [(&str, [(i64, i64, i64); 2]); 6] = [
    ("delta1", [(0, 1, 4), (8, 6, 1)]),
    ("epsilon1", [(0, 1, 16), (8, -1, 1)]),
    ("delta2", [(0, -1, 8), (4, -3, 1)]),
    ("epsilon2", [(0, 0, 1), (4, 1, 1)]),
    ("delta3", [(0, -1, 8), (4, 3, 1)]),
    ("epsilon3", [(0, 0, 1), (4, -1, 1)]),
];

fn is_integral(c: &Scalar) -> bool {
    c.as_rational().is_some_and(|r| r.is_integer())
}

fn modform_fourier(q: i64, cfg: &EvalConfig) -> Result<VerificationReport> {
    let q = q.max(8);
    let mut checks = Vec::new();
    for (name, fixture) in FOURIER_FIXTURES {
        let form: ModularForm = name.parse::<crate::modforms::FormName>()?.build(q)?;
        let lead_ok = fixture
            .iter()
            .all(|&(n, a, b)| form.series.coeff(n) == Scalar::from_ratio(a, b));
        let anchor = fixture
            .iter()
            .filter(|&&(_, a, _)| a != 0)
            .map(|&(n, a, b)| {
                let c = num_rational::Ratio::new(a, b);
                match n {
                    0 => c.to_string(),
                    8 => format!("({c})q"),
                    _ => format!("({c})q^({})", num_rational::Ratio::new(n, 8)),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ");
        checks.push(Check::exact(format!("{name}-leading"), format!("{name} = {anchor} + …"), lead_ok, Orders::q(q)));
        let higher_ok = form.series.iter().filter(|(n, _)| *n > 0).all(|(_, c)| is_integral(c));
        checks.push(Check::exact(
            format!("{name}-integral"),
            format!("{name} has integral coefficients beyond q⁰"),
            higher_ok,
            Orders::q(q),
        ));
    }
    let est = numeval::delta1_q_coefficient(cfg)?;
    checks.push(Check::new(
        "delta1-numeric-q1",
        "q¹ coefficient of δ₁ from product values at small q is 6",
        (est - 6.0).abs() < 1e-6,
        format!("estimate {est:.9}"),
        Orders::default(),
    ));
    Ok(VerificationReport::new(SuiteId::ModformFourier, checks))
}

/// Ring, q-order and whether the tilde family is compared.
const ROUTE_CASES: [(CsVariant, u32, i64, bool); 3] =
    [(CsVariant::Tm, 1, 2, false), (CsVariant::Tm, 3, 2, false), (CsVariant::Tilde, 2, 1, true)];

fn route_crosscheck() -> Result<VerificationReport> {
    let jobs: Vec<(CsVariant, u32, i64, bool, PhiFamily)> = ROUTE_CASES
        .iter()
        .flat_map(|&(v, k, q, t)| PhiFamily::ALL.map(|f| (v, k, q, t, f)))
        .collect();
    let checks: Vec<Result<Check>> = jobs
        .par_iter()
        .map(|&(v, k, q, tilde, fam)| {
            let spec = Arc::new(v.spec(k, q));
            let (a, b) = if tilde {
                (phi_tilde_route(fam, &spec)?, phi_tilde_bundle_route(fam, &spec)?)
            } else {
                (phi_theta_route(fam, &spec)?, phi_bundle_route(fam, &spec)?)
            };
            let label = phi_label(fam, tilde);
            Ok(Check::exact(
                format!("{label}-routes-k{k}"),
                format!("{label} from theta quotients = from bundle products"),
                a.agrees_with(&b)?,
                Orders::qk(q, k),
            ))
        })
        .collect();
    let checks = checks.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(SuiteId::RouteCrosscheck, checks))
}

fn cs_t_laws(q: i64, k: u32) -> Result<VerificationReport> {
    let kinds: Vec<CsKind> = CsVariant::ALL
        .iter()
        .flat_map(|&variant| PhiFamily::ALL.map(|family| CsKind { variant, family }))
        .collect();
    let checks: Vec<Result<Check>> = kinds
        .par_iter()
        .map(|&kind| {
            let spec = Arc::new(kind.variant.spec(k, q));
            let ok = check_t_law(kind, &spec)?;
            let image = CsKind { variant: kind.variant, family: kind.family.t_image() };
            Ok(Check::exact(format!("{kind}-T"), format!("{kind}(τ+1) = {image}(τ)"), ok, Orders::qk(q, k)))
        })
        .collect();
    let checks = checks.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(VerificationReport::new(SuiteId::CsTLaws, checks))
}

fn dim3_special(q: i64) -> Result<VerificationReport> {
    let q = q.max(8);
    let mut checks = Vec::new();
    let combo = logderiv_combo(ComboKind::Twist, PhiFamily::L, 4, q)?;
    // ∂_z at 0 is π times the y¹ coefficient
    let lhs = combo.coeff(1).shift_pi(1);
    let rhs = delta(1, q)?.series.scale(&Scalar::from_int(8).shift_pi(2));
    let diff = &lhs - &rhs;
    checks.push(Check::exact(
        "twist-combo-derivative",
        "∂_z(θ₂'/θ₂ + θ₃'/θ₃ − 2θ₁'/θ₁)|₀ = 8π²δ₁(τ)",
        diff.is_zero() && diff.trunc() >= 8 * q,
        Orders::q(q),
    ));
    let expect = [
        (PhiFamily::L, 1u8, Scalar::from_int(1), "1/π²"),
        (PhiFamily::W, 2, Scalar::from_ratio(1, 4), "1/(4π²)"),
        (PhiFamily::WPrime, 3, Scalar::from_ratio(1, 4), "1/(4π²)"),
    ];
    for (fam, i, c, shown) in expect {
        let got = dim3_twist_coefficient(fam, q)?;
        let want = delta(i, q)?.series.scale(&c.shift_pi(-2));
        checks.push(Check::exact(
            format!("dim3-{fam}"),
            format!("3-form of CS{fam}[xi] = {shown}·δ{i}(τ)·tr[B R^ξ_t]"),
            (&got - &want).is_zero(),
            Orders::qk(q, 1),
        ));
    }
    Ok(VerificationReport::new(SuiteId::Dim3Special, checks))
}

fn cancellation(case: CaseId, q: i64) -> Result<VerificationReport> {
    let report = derive(&CancellationCase::new(case, q))?;
    let o = Orders::qk(q, case.k());
    let checks = vec![
        Check::exact(
            "modular-decomposition",
            "Γ₀(2) side = 2⁶[z₀(8δ₁)³ + z₁(8δ₁)ε₁] with z from the Γ⁰(2) side",
            report.residual_zero,
            o,
        ),
        Check::exact("constant-terms", "q⁰ terms of both sides agree", report.constants_equal, o),
    ];
    let mut r = VerificationReport::new(SuiteId::Cancel(case), checks);
    r.cancellation = Some(report);
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tags_round_trip() {
        for id in SuiteId::MEMBERS.into_iter().chain([SuiteId::All]) {
            assert_eq!(id.tag().parse::<SuiteId>().unwrap(), id);
        }
        assert!("nope".parse::<SuiteId>().is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        let opts = SuiteOptions::default();
        for id in [SuiteId::ThetaBasics, SuiteId::Jacobi, SuiteId::SLaws, SuiteId::ModformFourier, SuiteId::Dim3Special] {
            let r = run_suite(id, &opts).unwrap();
            let failed: Vec<_> = r.checks.iter().filter(|c| !c.passed()).collect();
            assert!(r.pass, "{id}: {failed:?}");
        }
    }

    #[test]
    fn zero_order_is_a_usage_error() {
        let opts = SuiteOptions { q_order: Some(0), ..Default::default() };
        assert!(matches!(run_suite(SuiteId::Jacobi, &opts), Err(Error::InsufficientOrder(_))));
    }
}
