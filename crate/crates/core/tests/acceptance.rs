//! Acceptance runner: one line per criterion with its runtime against the
//! allowed budget. Exits nonzero when any criterion fails.

mod common;

use std::time::{Duration, Instant};

use transverify::cancel::{derive, CancellationCase, CaseId};
use transverify::modforms::FormName;
use transverify::numeval::{oracle_agreement, EvalConfig};
use transverify::qseries::QExpansion;
use transverify::scalars::Scalar;
use transverify::suites::{run_suite, SuiteId, SuiteOptions, FOURIER_FIXTURES};
use transverify::theta::{theta_nullwert, theta_prime_zero, ThetaFamily};

type Outcome = Result<String, String>;

fn fourier_fixtures() -> Outcome {
    // leading coefficients exactly as displayed for the six generators
    let literal: [(&str, &[(i64, i64, i64)]); 6] = [
        ("delta1", &[(0, 1, 4), (8, 6, 1)]),
        ("epsilon1", &[(0, 1, 16), (8, -1, 1)]),
        ("delta2", &[(0, -1, 8), (4, -3, 1)]),
        ("epsilon2", &[(4, 1, 1)]),
        ("delta3", &[(0, -1, 8), (4, 3, 1)]),
        ("epsilon3", &[(4, -1, 1)]),
    ];
    for ((name, want), (fixture_name, _)) in literal.iter().zip(FOURIER_FIXTURES) {
        assert_eq!(*name, fixture_name);
        let f = name.parse::<FormName>().unwrap().build(8).map_err(|e| e.to_string())?;
        for &(n, a, b) in *want {
            if f.series.coeff(n) != Scalar::from_ratio(a, b) {
                return Err(format!("{name} at q^({n}/8) is {}", f.series.coeff(n)));
            }
        }
        if name.starts_with("epsilon") && *name != "epsilon1" && !f.series.coeff(0).is_zero() {
            return Err(format!("{name} has a constant term"));
        }
        for (n, c) in f.series.iter().filter(|(n, _)| *n > 0) {
            if !c.as_rational().is_some_and(|r| r.is_integer()) {
                return Err(format!("{name} at q^({n}/8) is not an integer: {c}"));
            }
        }
    }
    Ok("six generators, integral to q^8".into())
}

fn jacobi() -> Outcome {
    let q = 20;
    let lhs = theta_prime_zero(q);
    let rhs = (&(&theta_nullwert(ThetaFamily::Theta1, q) * &theta_nullwert(ThetaFamily::Theta2, q))
        * &theta_nullwert(ThetaFamily::Theta3, q))
        .shift_pi(1);
    let diff: QExpansion = &lhs - &rhs;
    if diff.is_zero() && diff.trunc() >= 8 * q {
        Ok(format!("exact to q^{q}"))
    } else {
        Err(format!("difference {diff}"))
    }
}

fn suites_pass(ids: &[SuiteId], opts: &SuiteOptions) -> Outcome {
    let mut n = 0;
    for &id in ids {
        let r = run_suite(id, opts).map_err(|e| format!("{id}: {e}"))?;
        if let Some(c) = r.checks.iter().find(|c| !c.passed()) {
            return Err(format!("{id}/{}: {}", c.id, c.detail));
        }
        n += r.checks.len();
    }
    Ok(format!("{n} checks"))
}

fn t_laws() -> Outcome {
    let opts = SuiteOptions { q_order: Some(6), ..Default::default() };
    suites_pass(&[SuiteId::TLaws, SuiteId::CsTLaws], &opts)
}

fn s_laws() -> Outcome {
    let opts = SuiteOptions::default();
    let r = run_suite(SuiteId::SLaws, &opts).map_err(|e| e.to_string())?;
    let laws: Vec<_> = r.residuals.iter().filter(|l| !l.law_id.starts_with("oracle")).collect();
    let worst = laws.iter().map(|l| l.max_residual).fold(0.0, f64::max);
    if worst < 1e-9 && laws.iter().all(|l| l.pass) {
        Ok(format!("{} laws, max residual {worst:.2e}", laws.len()))
    } else {
        Err(format!("max residual {worst:.2e}"))
    }
}

fn routes() -> Outcome {
    suites_pass(&[SuiteId::RouteCrosscheck], &SuiteOptions::default())
}

fn dim3() -> Outcome {
    suites_pass(&[SuiteId::Dim3Special], &SuiteOptions { q_order: Some(8), ..Default::default() })
}

fn cancellation() -> Outcome {
    let mut notes = Vec::new();
    for id in CaseId::ALL {
        let r = derive(&CancellationCase::new(id, 4)).map_err(|e| format!("{id}: {e}"))?;
        if !r.residual_zero {
            return Err(format!("{id}: nonzero residual"));
        }
        if !r.constants_equal {
            return Err(format!("{id}: constant terms differ"));
        }
        notes.push(id.to_string());
    }
    Ok(format!("{} exact at q^4", notes.join(", ")))
}

fn oracle() -> Outcome {
    let cfg = EvalConfig::default();
    let mut worst = 0.0f64;
    for f in ThetaFamily::ALL {
        let r = oracle_agreement(f, 24, 5, &cfg).map_err(|e| e.to_string())?;
        if !r.pass {
            return Err(format!("{f}: residual {:.2e}", r.max_residual));
        }
        worst = worst.max(r.max_residual);
    }
    Ok(format!("four families, max residual {worst:.2e}"))
}

fn properties() -> Outcome {
    let suites = common::all();
    for (name, run) in &suites {
        run().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{} suites x {} cases", suites.len(), common::CASES))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("Fourier fixtures", fourier_fixtures, Duration::from_secs(1)),
        ("Jacobi identity", jacobi, Duration::from_secs(5)),
        ("exact T-laws", t_laws, Duration::from_secs(30)),
        ("numerical S-laws", s_laws, Duration::from_secs(5)),
        ("route cross-check", routes, Duration::from_secs(120)),
        ("dim-3 specialization", dim3, Duration::from_secs(10)),
        ("cancellation cases", cancellation, Duration::from_secs(600)),
        ("oracle agreement", oracle, Duration::from_secs(2)),
        ("property suites", properties, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; over budget")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {detail} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64(),
            budget.as_secs()
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
