//! Randomized property suites shared by the `properties` tests and the
//! acceptance runner. Each suite runs 100 cases.

#![allow(dead_code)]

use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use transverify::charring::{phi_theta_route, phi_tilde_route, FormElement, Monomial, OddGen, RingSpec};
use transverify::modforms::{basis_decompose, basis_monomials, build_from, decompose_in};
use transverify::qseries::{QExpansion, EXACT};
use transverify::scalars::{CycloRational, Scalar};
use transverify::theta::{theta_expand, Parity, PhiFamily, ThetaFamily};
use transverify::transgress::{cs_form, CsKind, CsVariant};

pub const CASES: u32 = 100;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cyclo() -> impl Strategy<Value = CycloRational> {
    prop::array::uniform4((-6i64..7, 1i64..5)).prop_map(|c| CycloRational::new(c.map(|(n, d)| rat(n, d))))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop::collection::vec((0i32..3, cyclo()), 0..3).prop_map(Scalar::from_terms)
}

/// A scalar with a single π-degree, so that it is a unit when nonzero.
fn unit_scalar() -> impl Strategy<Value = Scalar> {
    (0i32..3, cyclo()).prop_map(|(d, c)| Scalar::from_cyclo(c, d))
}

fn qexp() -> impl Strategy<Value = QExpansion> {
    (prop::collection::vec((0i64..24, scalar()), 0..5), prop::bool::ANY)
        .prop_map(|(t, exact)| QExpansion::from_terms(t, if exact { EXACT } else { 24 }))
}

fn small_rational() -> impl Strategy<Value = Scalar> {
    (-9i64..10, 1i64..6).prop_map(|(n, d)| Scalar::from_ratio(n, d))
}

fn ring() -> Arc<RingSpec> {
    static R: OnceLock<Arc<RingSpec>> = OnceLock::new();
    R.get_or_init(|| Arc::new(RingSpec::tm(2, 2))).clone()
}

fn monomial(spec: &RingSpec) -> impl Strategy<Value = Monomial> {
    let n = spec.n_roots;
    let odd = spec.odd_gens.clone();
    (prop::collection::vec(0u8..3, n), 0u8..2, prop::option::of(prop::sample::select(odd)))
        .prop_map(|(x, u, odd): (Vec<u8>, u8, Option<OddGen>)| Monomial { x, u, odd })
}

fn element() -> impl Strategy<Value = FormElement> {
    let spec = ring();
    prop::collection::vec((monomial(&spec), qexp()), 0..5)
        .prop_map(move |terms| FormElement::from_terms(&spec, terms))
}

fn same_q(a: &QExpansion, b: &QExpansion) -> bool {
    (a - b).is_zero()
}

fn same_form(a: &FormElement, b: &FormElement) -> bool {
    a.agrees_with(b).unwrap()
}

fn ensure(ok: bool, what: &str) -> Result<(), TestCaseError> {
    if ok {
        Ok(())
    } else {
        Err(TestCaseError::fail(what.to_string()))
    }
}

fn runner() -> TestRunner {
    TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() })
}

fn finish<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

pub fn scalar_field_axioms() -> Result<(), String> {
    finish(runner().run(&(scalar(), scalar(), scalar(), unit_scalar()), |(a, b, c, u)| {
        ensure(&(&a + &b) == &(&b + &a), "addition commutes")?;
        ensure(&(&a * &b) == &(&b * &a), "multiplication commutes")?;
        ensure((&a * &b) * &c == &a * (&b * &c), "multiplication associates")?;
        ensure(&a * (&b + &c) == &a * &b + &a * &c, "distributivity")?;
        if !u.is_zero() {
            ensure((&u * &u.inv().unwrap()).is_one(), "unit inverse")?;
        }
        Ok(())
    }))
}

pub fn qseries_ring_axioms() -> Result<(), String> {
    finish(runner().run(&(qexp(), qexp(), qexp()), |(a, b, c)| {
        ensure(same_q(&(&a * &b), &(&b * &a)), "commutes")?;
        ensure(same_q(&(&(&a * &b) * &c), &(&a * &(&b * &c))), "associates")?;
        ensure(same_q(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))), "distributes")?;
        ensure(same_q(&(&a + &QExpansion::exact_zero()), &a), "additive identity")?;
        Ok(())
    }))
}

pub fn form_ring_axioms() -> Result<(), String> {
    finish(runner().run(&(element(), element(), element()), |(a, b, c)| {
        let ab = a.mul(&b).unwrap();
        ensure(same_form(&ab, &b.mul(&a).unwrap()), "commutes")?;
        ensure(
            same_form(&ab.mul(&c).unwrap(), &a.mul(&b.mul(&c).unwrap()).unwrap()),
            "associates",
        )?;
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = ab.add(&a.mul(&c).unwrap()).unwrap();
        ensure(same_form(&lhs, &rhs), "distributes")?;
        ensure(same_form(&a.mul(&FormElement::one(&ring())).unwrap(), &a), "unit")?;
        Ok(())
    }))
}

pub fn tau_shift_order_eight() -> Result<(), String> {
    finish(runner().run(&(qexp(), element()), |(q, e)| {
        let mut s = q.clone();
        let mut f = e.clone();
        for _ in 0..8 {
            s = s.tau_shift();
            f = f.tau_shift();
        }
        ensure(s == q, "qexpansion")?;
        ensure(f == e, "form element")?;
        Ok(())
    }))
}

pub fn parity_scans() -> Result<(), String> {
    let factors = prop::collection::vec(prop::sample::select(ThetaFamily::ALL.to_vec()), 1..4);
    finish(runner().run(&(factors, 4i64..8), |(fams, y)| {
        let mut acc = theta_expand(fams[0], y, 2);
        for f in &fams[1..] {
            acc = &acc * &theta_expand(*f, y, 2);
        }
        let odd = fams.iter().filter(|f| **f == ThetaFamily::Theta).count() % 2 == 1;
        let want = if odd { Parity::Odd } else { Parity::Even };
        ensure(acc.parity() == want, "tag")?;
        ensure(acc.parity_consistent(), "scan agrees with tag")?;
        ensure(acc.scan_parity() == want, "scan")?;
        Ok(())
    }))
}

struct Forms {
    phi: Vec<FormElement>,
    phi_tilde: Vec<FormElement>,
    cs: Vec<FormElement>,
}

fn forms() -> &'static Forms {
    static F: OnceLock<Forms> = OnceLock::new();
    F.get_or_init(|| {
        let tm = Arc::new(RingSpec::tm(2, 2));
        let tilde = Arc::new(RingSpec::tilde(2, 1));
        let phi = PhiFamily::ALL.iter().map(|&f| phi_theta_route(f, &tm).unwrap()).collect();
        let phi_tilde = PhiFamily::ALL.iter().map(|&f| phi_tilde_route(f, &tilde).unwrap()).collect();
        let cs = PhiFamily::ALL
            .iter()
            .map(|&family| cs_form(CsKind { variant: CsVariant::Tm, family }, &tm).unwrap().element)
            .collect();
        Forms { phi, phi_tilde, cs }
    })
}

fn combination(parts: &[FormElement], coeffs: &[Scalar]) -> FormElement {
    let mut acc = FormElement::zero(parts[0].spec());
    for (p, c) in parts.iter().zip(coeffs) {
        acc = acc.add(&p.scale(c)).unwrap();
    }
    acc
}

pub fn pi_homogeneity() -> Result<(), String> {
    let coeffs = prop::collection::vec(small_rational(), 3);
    finish(runner().run(&(coeffs, 1i32..3), |(c, shift)| {
        let f = forms();
        if c.iter().all(Scalar::is_zero) {
            return Ok(());
        }
        let phi = combination(&f.phi, &c);
        ensure(phi.pi_offset().unwrap() == Some(0), "Phi combination has offset 0")?;
        let cs = combination(&f.cs, &c);
        ensure(cs.pi_offset().unwrap() == Some(-2), "CS combination has offset -2")?;
        let mixed = f.phi[0].add(&f.phi[1].scale(&Scalar::pi_pow(shift))).unwrap();
        ensure(mixed.pi_offset().is_err(), "mixing is detected")?;
        Ok(())
    }))
}

pub fn symmetric_invariance() -> Result<(), String> {
    let f = forms();
    let n = f.phi[0].spec().n_roots;
    let m = f.phi_tilde[0].spec().n_roots;
    let perms = (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), Just((0..m).collect::<Vec<_>>()).prop_shuffle());
    finish(runner().run(&(perms, 0usize..3), |((p, q), i)| {
        ensure(f.phi[i].permute_x(&p).unwrap() == f.phi[i], "Phi")?;
        ensure(f.cs[i].permute_x(&p).unwrap() == f.cs[i], "CS")?;
        ensure(f.phi_tilde[i].permute_x(&q).unwrap() == f.phi_tilde[i], "PhiTilde")?;
        Ok(())
    }))
}

pub fn decompose_round_trip() -> Result<(), String> {
    let weight = prop::sample::select(vec![2i64, 4, 6, 8, 10]);
    let case = (weight, prop::collection::vec(small_rational(), 3), 2u8..4, small_rational());
    finish(runner().run(&case, |(w, raw, i, scale)| {
        let monos = basis_monomials(w).unwrap();
        let coeffs: Vec<((i64, i64), Scalar)> = monos.iter().copied().zip(raw).collect();
        let q = 3;
        let f = build_from(&coeffs, i, w, q).unwrap();
        let back = if i == 2 { basis_decompose(&f, w).unwrap() } else { decompose_in(&f, i, w, "round trip").unwrap() };
        for ((ab, z), (ab2, z2)) in coeffs.iter().zip(&back) {
            ensure(ab == ab2 && z == z2, "coefficients survive the round trip")?;
        }
        let scaled = decompose_in(&f.scale(&scale), i, w, "scaled").unwrap();
        for ((_, z), (_, z2)) in coeffs.iter().zip(&scaled) {
            ensure(&(z * &scale) == z2, "decomposition is linear")?;
        }
        Ok(())
    }))
}

/// Every suite, by name.
pub fn all() -> Vec<(&'static str, fn() -> Result<(), String>)> {
    vec![
        ("scalar field axioms", scalar_field_axioms),
        ("q-series ring axioms", qseries_ring_axioms),
        ("form ring axioms", form_ring_axioms),
        ("tau_shift^8 = id", tau_shift_order_eight),
        ("parity scans", parity_scans),
        ("pi-homogeneity audits", pi_homogeneity),
        ("symmetric invariance", symmetric_invariance),
        ("decompose/build round trip", decompose_round_trip),
    ]
}
