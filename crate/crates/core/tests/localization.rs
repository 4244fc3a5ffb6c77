use hodge_core::closed::C_closed;
use hodge_core::hodge::HodgeEngine;
use hodge_core::localize::{
    g_series, i_series, j_series, partition_relation, C_localized, I_g, J_g, Linearization,
};
use hodge_core::series::sinc_half_inverse;
use hodge_core::Rat;

#[test]
fn linearization_independence() {
    let e = HodgeEngine::new();
    for g in 1..=3u32 {
        let i0 = I_g(&e, g, Linearization::new(0, 0)).unwrap();
        let j0 = J_g(&e, g, Linearization::new(0, -1)).unwrap();
        for a in -2..=2 {
            for b in -2..=2 {
                let lin = Linearization::new(a, b);
                assert_eq!(I_g(&e, g, lin).unwrap(), i0, "I g={g} {lin:?}");
                assert_eq!(J_g(&e, g, lin).unwrap(), j0, "J g={g} {lin:?}");
            }
        }
    }
}

#[test]
fn localization_series_displays() {
    let e = HodgeEngine::new();
    let f0_it = sinc_half_inverse(6).unwrap().substitute_it().unwrap();
    assert_eq!(i_series(&e, 3, Linearization::new(0, 0)).unwrap(), f0_it);
    assert_eq!(
        j_series(&e, 3, Linearization::new(0, -1)).unwrap(),
        f0_it.mul(&f0_it).unwrap()
    );
    for xi in 0..=1 {
        let g = g_series(&e, xi, 2).unwrap();
        let f = e
            .capped_lambda_series(xi + 1, 2)
            .unwrap()
            .substitute_it()
            .unwrap();
        assert_eq!(
            j_series(&e, 2, Linearization::new(0, xi)).unwrap(),
            g.mul(&f).unwrap(),
            "ξ={xi}"
        );
    }
}

#[test]
fn cover_contributions_agree() {
    let e = HodgeEngine::new();
    for g in 0..=4u32 {
        for d in 1..=5 {
            assert_eq!(
                C_localized(&e, g, d).unwrap(),
                C_closed(g, d).unwrap(),
                "g={g} d={d}"
            );
        }
    }
    assert_eq!(C_localized(&e, 0, 3).unwrap(), Rat::new(1, 27));
    assert_eq!(C_localized(&e, 1, 3).unwrap(), Rat::new(1, 36));
}

#[test]
fn partition_relations_vanish() {
    let e = HodgeEngine::new();
    for g in 1..=3 {
        for d in 2..=4 {
            assert_eq!(
                partition_relation(&e, g, d).unwrap(),
                Rat::zero(),
                "g={g} d={d}"
            );
        }
    }
}
