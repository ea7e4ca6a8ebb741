//! Chern-Simons transgressions and their τ ↦ τ+1 behaviour.

use std::sync::Arc;

use transverify::theta::PhiFamily;
use transverify::transgress::{check_t_law, cs_form, dim3_twist_coefficient, CsKind, CsVariant};

fn main() {
    for variant in CsVariant::ALL {
        let spec = Arc::new(variant.spec(2, 3));
        for family in PhiFamily::ALL {
            let kind = CsKind { variant, family };
            let form = cs_form(kind, &spec).unwrap();
            let top = form.top_component();
            println!(
                "{kind}: degree {}, {} top terms, T-law {}",
                form.top_degree,
                top.len(),
                check_t_law(kind, &spec).unwrap()
            );
        }
    }

    // in dimension 3 the whole form is a multiple of tr[B R]
    for fam in PhiFamily::ALL {
        println!("dim 3, {fam}: {}", dim3_twist_coefficient(fam, 3).unwrap());
    }
}
