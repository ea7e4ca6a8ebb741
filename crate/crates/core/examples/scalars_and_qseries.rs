//! Exact arithmetic over ℚ(ζ₈)[π] and truncated q^{1/8}-series.

use transverify::qseries::QExpansion;
use transverify::scalars::Scalar;

fn main() {
    let z = Scalar::zeta8_pow(1);
    println!("zeta^4 = {}", z.pow(4));
    println!("sqrt2 * sqrt2 = {}", &Scalar::sqrt2() * &Scalar::sqrt2());
    println!("(2 pi)^-1 = {}", Scalar::from_int(2).shift_pi(1).inv().unwrap());

    // 1 - q inverted to q^3
    let a = QExpansion::from_ints(&[(0, 1), (8, -1)], 24);
    let inv = a.inv().unwrap();
    println!("1/(1-q) = {inv}");
    println!("check: {}", &a * &inv);

    // τ ↦ τ+1 multiplies q^{n/8} by ζ₈^n
    let half = QExpansion::monomial(4, Scalar::one());
    println!("q^(1/2) under tau+1: {}", half.tau_shift());
}
