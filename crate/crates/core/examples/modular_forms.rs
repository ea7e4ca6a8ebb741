//! The weight-2 and weight-4 generators and the weight-6 basis.

use transverify::modforms::{basis_decompose, build_from, delta, epsilon, t_transform};
use transverify::scalars::Scalar;

fn main() {
    for i in 1..=3 {
        let d = delta(i, 3).unwrap();
        let e = epsilon(i, 3).unwrap();
        println!("{} over {}: {}", d.name, d.group, d.series);
        println!("{} over {}: {}", e.name, e.group, e.series);
    }

    let t = t_transform(&delta(2, 3).unwrap());
    println!("delta2(tau+1) = {} ({})", t.name, (&t.series - &delta(3, 3).unwrap().series).is_zero());

    let coeffs = [((3, 0), Scalar::from_ratio(1, 3)), ((1, 1), Scalar::from_int(-5))];
    let f = build_from(&coeffs, 2, 6, 4).unwrap();
    println!("weight 6 form: {f}");
    for ((a, b), z) in basis_decompose(&f, 6).unwrap() {
        println!("  (8 delta2)^{a} epsilon2^{b}: {z}");
    }
}
