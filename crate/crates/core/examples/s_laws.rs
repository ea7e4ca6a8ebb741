//! Numerical S-transformation laws at the default sample points.

use transverify::numeval::{check_quotient_s_laws, check_s_laws, delta1_q_coefficient, EvalConfig};

fn main() {
    let cfg = EvalConfig::default();
    let reports = check_s_laws(&cfg).unwrap().into_iter().chain(check_quotient_s_laws(&cfg).unwrap());
    for r in reports {
        println!("{:<20} max residual {:.2e}  {}", r.law_id, r.max_residual, if r.pass { "ok" } else { "FAIL" });
    }
    println!("q^1 coefficient of delta1 from products: {:.8}", delta1_q_coefficient(&cfg).unwrap());
}
