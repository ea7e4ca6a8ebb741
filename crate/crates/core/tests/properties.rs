mod common;

macro_rules! property {
    ($($name:ident),* $(,)?) => {
        $(
            #[test]
            fn $name() {
                if let Err(e) = common::$name() {
                    panic!("{e}");
                }
            }
        )*
    };
}

property!(
    scalar_field_axioms,
    qseries_ring_axioms,
    form_ring_axioms,
    tau_shift_order_eight,
    parity_scans,
    pi_homogeneity,
    symmetric_invariance,
    decompose_round_trip,
);
