//! Φ forms in the universal ring, built two independent ways.

use std::sync::Arc;

use transverify::charring::{phi_bundle_route, phi_theta_route, phi_tilde_route, RingSpec};
use transverify::theta::PhiFamily;

fn main() {
    let spec = Arc::new(RingSpec::tm(2, 1));
    for fam in PhiFamily::ALL {
        let a = phi_theta_route(fam, &spec).unwrap();
        let b = phi_bundle_route(fam, &spec).unwrap();
        println!("{fam} on a 7-manifold, {} terms, routes agree: {}", a.len(), a.agrees_with(&b).unwrap());
    }

    let phi = phi_theta_route(PhiFamily::W, &spec).unwrap();
    for (m, c) in phi.terms().iter().take(6) {
        println!("  {m}: {c}");
    }

    let tilde = Arc::new(RingSpec::tilde(1, 1));
    let t = phi_tilde_route(PhiFamily::L, &tilde).unwrap();
    println!("PhiTilde_L on a 5-manifold has pi offset {:?}", t.pi_offset().unwrap());
}
