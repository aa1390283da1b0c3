use hk_core::geometry::{
    alpha_constant, anticanonical, build_fan, decompose, exponents, restrict_to_f, strongly_accumulates, DecompositionMode, GeometryError,
    Restriction, StratumKind,
};
use hk_core::{HkVariety, LineBundleClass, PoleCase};
use num_rational::Rational64;
use proptest::prelude::*;
use std::collections::BTreeSet;

fn var(t: usize, a: &[u64]) -> HkVariety {
    HkVariety::new(t, a.to_vec()).unwrap()
}

fn ray_set(x: &HkVariety) -> BTreeSet<Vec<i64>> {
    build_fan(x).rays.into_iter().collect()
}

fn set(v: &[&[i64]]) -> BTreeSet<Vec<i64>> {
    v.iter().map(|r| r.to_vec()).collect()
}

prop_compose! {
    fn arb_variety()(r in 1usize..=4, t in 2usize..=4)(mut a in prop::collection::vec(0u64..=5, r), t in Just(t)) -> HkVariety {
        a.sort();
        HkVariety::new(t, a).unwrap()
    }
}

#[test]
fn invalid_varieties_rejected() {
    assert!(HkVariety::new(1, vec![0]).is_err());
    assert!(HkVariety::new(2, vec![]).is_err());
    assert!(HkVariety::new(2, vec![2, 1]).is_err());
}

#[test]
fn hirzebruch_surface_fan() {
    let x = var(2, &[1]);
    let fan = build_fan(&x);
    assert_eq!(fan.rays, vec![vec![-1, -1], vec![1, 0], vec![0, -1], vec![0, 1]]);
    assert_eq!(fan.maximal_cones.len(), 4);
    assert!(fan.is_unimodular());
}

#[test]
fn product_fan() {
    assert_eq!(ray_set(&var(2, &[0])), set(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]));
}

#[test]
fn threefold_fan() {
    let fan = build_fan(&var(2, &[0, 1]));
    assert_eq!(fan.rays, vec![vec![-1, -1, -1], vec![1, 0, 0], vec![0, -1, -1], vec![0, 1, 0], vec![0, 0, 1]]);
    assert_eq!(fan.maximal_cones.len(), 6);
    assert!(fan.is_unimodular());
}

#[test]
fn anticanonical_examples() {
    assert_eq!(anticanonical(&var(2, &[0, 1])), LineBundleClass::new(3, 4));
    for a in 0..6 {
        assert_eq!(anticanonical(&var(2, &[a])), LineBundleClass::new(2, a as i64 + 2));
    }
    assert_eq!(anticanonical(&var(2, &[0])), LineBundleClass::new(2, 2));
}

#[test]
fn bigness_examples() {
    assert!(LineBundleClass::new(3, 4).is_big());
    assert!(!LineBundleClass::new(0, 1).is_big());
    assert!(!LineBundleClass::new(2, -1).is_big());
}

#[test]
fn restriction_examples() {
    assert_eq!(
        restrict_to_f(&var(2, &[0, 1]), LineBundleClass::new(3, 4)),
        Restriction::Variety { variety: var(2, &[0]), bundle: LineBundleClass::new(3, 1) }
    );
    assert_eq!(restrict_to_f(&var(2, &[0]), LineBundleClass::new(3, 1)), Restriction::ProjectiveSpace { dim: 1, twist: 1 });
    let r = restrict_to_f(&var(2, &[1]), LineBundleClass::new(1, 1));
    assert_eq!(r, Restriction::ProjectiveSpace { dim: 1, twist: 0 });
    assert!(!r.is_big());
}

#[test]
fn alpha_examples() {
    assert_eq!(alpha_constant(&var(2, &[1])), Rational64::new(1, 6));
    assert_eq!(alpha_constant(&var(2, &[0, 1])), Rational64::new(1, 12));
    assert_eq!(alpha_constant(&var(2, &[0])), Rational64::new(1, 4));
}

#[test]
fn exponent_examples() {
    let x = var(2, &[1]);
    let e = exponents(&x, LineBundleClass::new(2, 3)).unwrap();
    assert_eq!((e.lambda_exp, e.mu_exp, e.a), (Rational64::from(1), Rational64::from(1), Rational64::from(1)));
    assert_eq!((e.log_power, e.case), (1, PoleCase::EqualCase));

    let e = exponents(&x, LineBundleClass::new(1, 1)).unwrap();
    assert_eq!((e.lambda_exp, e.mu_exp, e.a), (Rational64::from(2), Rational64::from(3), Rational64::from(3)));
    assert_eq!((e.log_power, e.case), (0, PoleCase::MuDominates));

    let e = exponents(&x, LineBundleClass::new(3, 1)).unwrap();
    assert_eq!(e.case, PoleCase::MuDominates);
    let e = exponents(&x, LineBundleClass::new(1, 3)).unwrap();
    assert_eq!(e.case, PoleCase::LambdaDominates);

    assert!(matches!(exponents(&x, LineBundleClass::new(0, 3)), Err(GeometryError::NotBig(_))));
}

#[test]
fn decomposition_examples() {
    let x = var(2, &[0, 1]);
    let k = anticanonical(&x);
    let full = decompose(&x, k, DecompositionMode::Full);
    let kinds: Vec<_> = full.iter().map(|s| s.kind.clone()).collect();
    assert_eq!(kinds, vec![StratumKind::GoodOpen(x.clone()), StratumKind::GoodOpen(var(2, &[0])), StratumKind::ProjectiveSpace { dim: 1 }]);
    assert_eq!(full[1].bundle, LineBundleClass::new(3, 1));
    assert_eq!(full[2].bundle.mu, 1);
    assert!(full.iter().all(|s| s.big));

    let short = decompose(&x, k, DecompositionMode::StopAtProduct);
    let kinds: Vec<_> = short.iter().map(|s| s.kind.clone()).collect();
    assert_eq!(kinds, vec![StratumKind::GoodOpen(x.clone()), StratumKind::Product { base_dim: 1, fiber_dim: 1 }]);

    for a in 1..4 {
        let s = var(2, &[a]);
        let kinds: Vec<_> = decompose(&s, anticanonical(&s), DecompositionMode::Full).into_iter().map(|s| s.kind).collect();
        assert_eq!(kinds, vec![StratumKind::GoodOpen(s.clone()), StratumKind::ProjectiveSpace { dim: 1 }]);
    }
}

#[test]
fn accumulation_examples() {
    let x = var(2, &[1]);
    assert_eq!(strongly_accumulates(&x, LineBundleClass::new(2, 3)), Ok(true));
    assert!(matches!(strongly_accumulates(&x, LineBundleClass::new(1, 1)), Err(GeometryError::NotApplicable(_))));
    assert_eq!(strongly_accumulates(&x, LineBundleClass::new(1, 3)), Ok(false));
}

#[test]
fn display_round_trip() {
    let x = var(3, &[0, 2, 2]);
    assert_eq!(x.to_string(), "3,3:0,2,2");
    assert_eq!(hk_core::literal::parse_variety(&x.to_string()).unwrap(), x);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fan_is_smooth_with_d_plus_two_rays(x in arb_variety()) {
        let fan = build_fan(&x);
        prop_assert_eq!(fan.rays.len(), x.dim() + 2);
        prop_assert_eq!(fan.maximal_cones.len(), x.t() * (x.r() + 1));
        for ray in &fan.rays {
            let g = ray.iter().fold(0i64, |g, &c| num_integer::gcd(g, c));
            prop_assert_eq!(g, 1);
        }
        prop_assert!(fan.is_unimodular());
    }

    #[test]
    fn divisor_classes_satisfy_linear_relations(x in arb_variety()) {
        let fan = build_fan(&x);
        let classes = fan.divisor_classes(&x);
        for m in 0..fan.ambient_dim() {
            let (mut l, mut u) = (0i64, 0i64);
            for (ray, c) in fan.rays.iter().zip(&classes) {
                l += ray[m] * c.lambda;
                u += ray[m] * c.mu;
            }
            prop_assert_eq!((l, u), (0, 0));
        }
        let total = classes.iter().fold(LineBundleClass::new(0, 0), |s, c| LineBundleClass::new(s.lambda + c.lambda, s.mu + c.mu));
        prop_assert_eq!(total, anticanonical(&x));
    }

    #[test]
    fn anticanonical_is_big_with_unit_exponents(x in arb_variety()) {
        let k = anticanonical(&x);
        prop_assert!(k.is_big());
        let e = exponents(&x, k).unwrap();
        prop_assert_eq!(e.lambda_exp, Rational64::from(1));
        prop_assert_eq!(e.mu_exp, Rational64::from(1));
        prop_assert_eq!(e.case, PoleCase::EqualCase);
        prop_assert_eq!(e.log_power, 1);
        prop_assert_eq!(alpha_constant(&x), Rational64::new(1, (x.r() as i64 + 1) * k.mu));
    }

    #[test]
    fn restriction_reaches_base_in_r_steps(x in arb_variety(), lambda in 1i64..5, mu in 1i64..30) {
        let mut cur = x.clone();
        let mut l = LineBundleClass::new(lambda, mu);
        let mut steps = 0;
        loop {
            steps += 1;
            match restrict_to_f(&cur, l) {
                Restriction::Variety { variety, bundle } => {
                    prop_assert_eq!(variety.dim() + 1, cur.dim());
                    prop_assert_eq!(bundle.lambda, l.lambda);
                    cur = variety;
                    l = bundle;
                }
                Restriction::ProjectiveSpace { dim, .. } => {
                    prop_assert_eq!(dim, x.t() - 1);
                    break;
                }
            }
        }
        prop_assert_eq!(steps, x.r());
        prop_assert_eq!(decompose(&x, LineBundleClass::new(lambda, mu), DecompositionMode::Full).len(), x.r() + 1);
    }

    #[test]
    fn fiber_weights_shape(x in arb_variety()) {
        let b = x.fiber_weights();
        prop_assert_eq!(b.len(), x.r() + 1);
        prop_assert_eq!(b[0], 0);
        prop_assert_eq!(b[1], x.a_max());
        prop_assert_eq!(*b.iter().max().unwrap(), x.a_max());
        prop_assert!(x.n_max() >= 1);
        prop_assert_eq!(x.n_max() == x.r(), x.a().iter().all(|&v| v == x.a_max()));
    }
}
