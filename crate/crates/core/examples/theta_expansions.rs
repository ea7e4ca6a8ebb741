//! Two-variable expansions of the Jacobi theta functions in y = πv.

use num_complex::Complex64;
use transverify::numeval::{theta_eval, EvalConfig};
use transverify::theta::{theta_expand, theta_nullwert, theta_prime_zero, ThetaFamily};

fn main() {
    for f in ThetaFamily::ALL {
        let s = theta_expand(f, 4, 2);
        println!("{f} ({:?}):", s.parity());
        for (m, c) in s.iter() {
            println!("  y^{m}: {c}");
        }
    }

    let lhs = theta_prime_zero(6);
    let rhs = (&(&theta_nullwert(ThetaFamily::Theta1, 6) * &theta_nullwert(ThetaFamily::Theta2, 6))
        * &theta_nullwert(ThetaFamily::Theta3, 6))
        .shift_pi(1);
    println!("Jacobi identity to q^6: {}", (&lhs - &rhs).is_zero());

    // the exact series summed numerically against the product formula
    let (v, tau) = (Complex64::new(0.3, 0.1), Complex64::new(0.3, 1.2));
    let (exact, tail) = theta_expand(ThetaFamily::Theta2, 24, 5).eval(v, tau).unwrap();
    let numeric = theta_eval(ThetaFamily::Theta2, v, tau, &EvalConfig::default()).unwrap();
    println!("theta2 at v={v}, tau={tau}: {exact:.12} vs {numeric:.12} (q-tail {tail:.1e})");
}
