//! Derives the three cancellation formulas and prints their coordinates.

use transverify::cancel::{coordinates, derive, CancellationCase, CaseId};

fn main() {
    let q = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    for id in CaseId::ALL {
        let r = derive(&CancellationCase::new(id, q)).unwrap();
        println!("{id}: residual zero {}, constants equal {}", r.residual_zero, r.constants_equal);
        println!("  {}", r.matched_display);
        for (m, z0, z1) in coordinates(&r).into_iter().take(4) {
            println!("  {m}: z0 = {z0}, z1 = {z1}");
        }
    }
}
