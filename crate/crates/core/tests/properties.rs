use hodge_core::hodge::{lambda_to_ch, ChPoly, HodgeEngine, HodgeKey, LambdaMonomial};
use hodge_core::intersect::{dimension, is_stable, EliminationOrder, Intersector, KappaPsiKey};
use hodge_core::Rat;
use proptest::prelude::*;

/// Spreads `total` units over `n` slots using `picks` as slot choices.
fn spread(n: usize, total: i64, picks: &[usize]) -> Vec<u32> {
    let mut v = vec![0u32; n];
    for i in 0..total.max(0) as usize {
        v[picks[i % picks.len()] % n] += 1;
    }
    v
}

fn engine() -> &'static Intersector {
    static E: std::sync::OnceLock<Intersector> = std::sync::OnceLock::new();
    E.get_or_init(Intersector::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn string_equation(g in 0u32..=5, n in 1usize..=4, picks in prop::collection::vec(0usize..4, 1..24)) {
        prop_assume!(is_stable(g, n));
        let ks = spread(n, dimension(g, n) + 1, &picks);
        let mut with = ks.clone();
        with.push(0);
        let mut rhs = Rat::zero();
        for i in 0..n {
            if ks[i] > 0 {
                let mut lower = ks.clone();
                lower[i] -= 1;
                rhs += engine().psi(g, &lower).unwrap();
            }
        }
        prop_assert_eq!(engine().psi(g, &with).unwrap(), rhs);
    }

    #[test]
    fn dilaton_equation(g in 0u32..=5, n in 1usize..=4, picks in prop::collection::vec(0usize..4, 1..24)) {
        prop_assume!(is_stable(g, n));
        let ks = spread(n, dimension(g, n), &picks);
        let mut with = ks.clone();
        with.push(1);
        let factor = Rat::int(2 * g as i64 - 2 + n as i64);
        prop_assert_eq!(engine().psi(g, &with).unwrap(), factor * engine().psi(g, &ks).unwrap());
    }

    #[test]
    fn dimension_gate(g in 0u32..=4, exps in prop::collection::vec(0u32..6, 1..5)) {
        prop_assume!(is_stable(g, exps.len()));
        let deg: i64 = exps.iter().map(|&k| k as i64).sum();
        prop_assume!(deg != dimension(g, exps.len()));
        prop_assert_eq!(engine().psi(g, &exps).unwrap(), Rat::zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn kappa_elimination_order(
        g in 0u32..=3,
        n in 1usize..=3,
        kappas in prop::collection::vec(1u32..=3, 1..=3),
        picks in prop::collection::vec(0usize..3, 1..12),
    ) {
        prop_assume!(is_stable(g, n));
        let room = dimension(g, n) - kappas.iter().map(|&a| a as i64).sum::<i64>();
        prop_assume!(room >= 0);
        let key = KappaPsiKey::new(g, spread(n, room, &picks), kappas).unwrap();
        let e = Intersector::new();
        let a = e.kappa_psi_integral_with(&key, EliminationOrder::LargestFirst);
        let b = e.kappa_psi_integral_with(&key, EliminationOrder::SmallestFirst);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, e.kappa_psi_integral_direct(&key));
    }

    #[test]
    fn hodge_symmetric_in_markings(g in 1u32..=2, lam in 1u32..=2, picks in prop::collection::vec(0usize..3, 1..10)) {
        prop_assume!(lam <= g);
        let e = HodgeEngine::new();
        let ks = spread(3, dimension(g, 3) - lam as i64, &picks);
        let mut rev = ks.clone();
        rev.reverse();
        prop_assert_eq!(e.hodge(g, &ks, &[lam]).unwrap(), e.hodge(g, &rev, &[lam]).unwrap());
    }
}

/// λ's are the elementary symmetric functions of the Chern roots and
/// `k! ch_k` their power sums, so Newton's identities give an independent route.
fn newton_lambdas(max: u32) -> Vec<ChPoly> {
    let p = |k: u32| {
        let f: Rat = (1..=k as i64).map(Rat::int).product();
        ChPoly::ch(k).scale(&f)
    };
    let mut e = vec![ChPoly::one()];
    for n in 1..=max {
        let mut s = ChPoly::zero();
        for i in 1..=n {
            let term = e[(n - i) as usize]
                .mul(&p(i))
                .scale(&Rat::sign(i as i64 - 1));
            s = s.add(&term);
        }
        e.push(s.scale(&Rat::new(1, n as i64)));
    }
    e
}

#[test]
fn lambda_to_ch_matches_newton_identities() {
    let newton = newton_lambdas(6);
    for g in 1..=6u32 {
        for j in 1..=g {
            let m = LambdaMonomial::from_indices(g, vec![0], &[j]).unwrap();
            assert_eq!(lambda_to_ch(&m), newton[j as usize], "λ_{j} in genus {g}");
        }
    }
    let m = LambdaMonomial::from_indices(4, vec![0], &[1, 2, 2, 3]).unwrap();
    let want = newton[1].mul(&newton[2]).mul(&newton[2]).mul(&newton[3]);
    assert_eq!(lambda_to_ch(&m), want);
    assert_eq!(want.homogeneous_degree(), Some(8));
}

#[test]
fn one_point_tower() {
    let e = Intersector::new();
    let mut expected = Rat::one();
    for g in 1..=6u32 {
        expected /= Rat::int(24 * g as i64);
        assert_eq!(e.psi(g, &[3 * g - 2]).unwrap(), expected);
    }
}

#[test]
fn hodge_keys_reject_unstable() {
    assert!(HodgeKey::new(0, vec![0, 0], vec![], vec![]).is_err());
    assert!(HodgeKey::new(1, vec![], vec![], vec![1]).is_err());
    assert!(LambdaMonomial::from_indices(2, vec![1], &[3]).is_err());
}
