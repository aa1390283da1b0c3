use std::collections::HashSet;

use hk_core::enumerate::{
    count, count_direct, count_projective, count_projective_moebius, estimate_exponent, fit_log_model, for_each_point, sweep, CountRequest,
    CountTarget, EnumError, FitError,
};
use hk_core::geometry::anticanonical;
use hk_core::heights::height_le;
use hk_core::{HkRationalPoint, HkVariety, LineBundleClass, ProjectivePoint, Region};
use num_integer::Integer;
use num_rational::BigRational;
use proptest::prelude::*;

fn b(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn var(t: usize, a: &[u64]) -> HkVariety {
    HkVariety::new(t, a.to_vec()).unwrap()
}

fn hk(x: &HkVariety, l: LineBundleClass, bound: BigRational, region: Region, threads: usize) -> CountRequest {
    CountRequest { target: CountTarget::Hk { variety: x.clone(), bundle: l }, bound, region, threads }
}

fn hk_count(x: &HkVariety, l: LineBundleClass, bound: i64, region: Region) -> u128 {
    count(&hk(x, l, b(bound), region, 1)).unwrap().count
}

/// All canonical primitive vectors of length `n` with entries in `[-m, m]`.
fn box_points(n: usize, m: i64) -> Vec<Vec<i64>> {
    let side = (2 * m + 1) as usize;
    let mut out = Vec::new();
    for mut idx in 0..side.pow(n as u32) {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push((idx % side) as i64 - m);
            idx /= side;
        }
        let g = v.iter().fold(0i64, |g, &c| g.gcd(&c));
        let first = v.iter().find(|&&c| c != 0);
        if g == 1 && first.is_some_and(|&c| c > 0) {
            out.push(v);
        }
    }
    out
}

/// Naive scan of a box guaranteed to contain every point of height at most `bound`.
///
/// On the whole variety some fiber coordinate is a nonzero integer, so `H_fib^2 >= |Q|^{-2 a_r}` and
/// `H^2 >= |Q|^{2(mu - lambda a_r)}`; each `y_i^2 |Q|^{-2 b_i} <= H_fib^2 <= (B^2 |Q|^{-2 mu})^{1/lambda}`.
fn brute_force(x: &HkVariety, l: LineBundleClass, bound: i64, region: Region) -> u128 {
    let bmax = x.a_max() as i64;
    let base_exp = match region {
        Region::GoodOpen => l.mu,
        _ => l.mu - l.lambda * bmax,
    };
    assert!(base_exp > 0, "box would be unbounded");
    let b2 = (bound * bound) as f64;
    let nq_max = b2.powf(1.0 / base_exp as f64);
    let m = nq_max.sqrt().floor() as i64;
    let w = x.fiber_weights();
    let mut total = 0u128;
    for q in box_points(x.t(), m) {
        let nq: i64 = q.iter().map(|c| c * c).sum();
        if nq as f64 > nq_max + 1e-9 {
            continue;
        }
        let fib = (b2 / (nq as f64).powi(l.mu as i32)).powf(1.0 / l.lambda as f64);
        let ymax = w.iter().map(|&bi| ((nq as f64).powi(bi as i32) * fib).sqrt()).fold(0.0, f64::max).floor() as i64 + 1;
        let base = ProjectivePoint::from_i64(&q).unwrap();
        for y in box_points(x.r() + 1, ymax) {
            let p = HkRationalPoint::new(x, base.clone(), ProjectivePoint::from_i64(&y).unwrap()).unwrap();
            let in_region = match region {
                Region::GoodOpen => y[0] != 0,
                Region::SubbundleF => y[0] == 0,
                Region::Whole => true,
            };
            if in_region && height_le(x, l, &p, &b(bound)).unwrap() {
                total += 1;
            }
        }
    }
    total
}

#[test]
fn projective_examples() {
    assert_eq!(count_projective(1, 1, &b(1)).unwrap(), 2);
    assert_eq!(count_projective(1, 1, &b(2)).unwrap(), 4);
    assert_eq!(count_projective(2, 1, &b(1)).unwrap(), 3);
    assert_eq!(count_projective_moebius(1, &b(2)), 4);
    assert_eq!(count_projective_moebius(1, &b(1)), 2);
    assert_eq!(count_projective(2, 1, &b(50)).unwrap(), count_projective_moebius(2, &b(50)));
}

#[test]
fn projective_against_box_scan() {
    for n in 1..=3 {
        for bound in 1..=6i64 {
            let naive = box_points(n + 1, bound).iter().filter(|v| v.iter().map(|c| c * c).sum::<i64>() <= bound * bound).count();
            assert_eq!(count_projective(n, 1, &b(bound)).unwrap(), naive as u128, "n={n} B={bound}");
        }
    }
}

#[test]
fn moebius_oracle_small() {
    for n in 1..=3 {
        for bound in 1..=20 {
            assert_eq!(count_projective(n, 1, &b(bound)).unwrap(), count_projective_moebius(n, &b(bound)), "n={n} B={bound}");
        }
    }
}

#[test]
fn rational_bounds() {
    // sqrt(5) < 9/4 so [1:2] and [2:1] are in, [2:2] is not primitive
    assert_eq!(count_projective(1, 1, &BigRational::new(9.into(), 4.into())).unwrap(), 8);
    assert_eq!(count_projective(1, 1, &BigRational::new(11.into(), 5.into())).unwrap(), 4);
}

#[test]
fn surface_at_bound_one() {
    let x = var(2, &[1]);
    let l = LineBundleClass::new(1, 1);
    assert_eq!(hk_count(&x, l, 1, Region::GoodOpen), 2);
    assert_eq!(brute_force(&x, l, 1, Region::GoodOpen), 2);
}

#[test]
fn threefold_whole_matches_brute_force() {
    let x = var(2, &[0, 1]);
    let k = anticanonical(&x);
    for region in [Region::GoodOpen, Region::SubbundleF, Region::Whole] {
        assert_eq!(hk_count(&x, k, 20, region), brute_force(&x, k, 20, region), "{region:?}");
    }
}

#[test]
fn counts_match_brute_force_on_small_instances() {
    let cases: &[(usize, &[u64], i64, i64, i64)] = &[
        (2, &[1], 2, 3, 12),
        (2, &[1], 1, 1, 8),
        (2, &[2], 2, 5, 10),
        (2, &[0], 3, 1, 9),
        (3, &[1], 2, 4, 6),
        (2, &[1, 1], 3, 5, 6),
        (2, &[0, 2], 1, 3, 5),
    ];
    for &(t, a, lambda, mu, bound) in cases {
        let x = var(t, a);
        let l = LineBundleClass::new(lambda, mu);
        assert_eq!(hk_count(&x, l, bound, Region::GoodOpen), brute_force(&x, l, bound, Region::GoodOpen), "{x} {l} U");
        if mu - lambda * x.a_max() as i64 > 0 {
            assert_eq!(hk_count(&x, l, bound, Region::Whole), brute_force(&x, l, bound, Region::Whole), "{x} {l} X");
        }
    }
}

#[test]
fn not_big_is_an_error() {
    let x = var(2, &[1]);
    let l = LineBundleClass::new(1, 1);
    assert!(matches!(count(&hk(&x, l, b(5), Region::SubbundleF, 1)), Err(EnumError::NotBig(_))));
    assert!(matches!(count(&hk(&x, l, b(5), Region::Whole, 1)), Err(EnumError::NotBig(_))));
    assert!(matches!(count(&hk(&x, LineBundleClass::new(0, 2), b(5), Region::GoodOpen, 1)), Err(EnumError::NotBig(_))));
    assert!(matches!(count(&hk(&x, l, b(0), Region::GoodOpen, 1)), Err(EnumError::NonPositiveBound)));
}

#[test]
fn subbundle_reduction_matches_direct_enumeration() {
    let cases: &[(usize, &[u64], i64, i64)] = &[(2, &[0, 1], 3, 4), (2, &[1, 3], 2, 9), (3, &[0, 1, 1], 4, 6), (2, &[2], 1, 3)];
    for &(t, a, lambda, mu) in cases {
        let x = var(t, a);
        let l = LineBundleClass::new(lambda, mu);
        for bound in [1, 3, 7, 15] {
            assert_eq!(
                hk_count(&x, l, bound, Region::SubbundleF),
                count_direct(&x, l, &b(bound), Region::SubbundleF).unwrap(),
                "{x} {l} B={bound}"
            );
            assert_eq!(hk_count(&x, l, bound, Region::Whole), count_direct(&x, l, &b(bound), Region::Whole).unwrap(), "{x} {l} B={bound}");
        }
    }
}

#[test]
fn streamed_points_are_distinct_and_in_range() {
    let x = var(2, &[0, 1]);
    let k = anticanonical(&x);
    for region in [Region::GoodOpen, Region::SubbundleF, Region::Whole] {
        let mut seen = HashSet::new();
        let mut dup = false;
        for_each_point(&x, k, &b(12), region, &mut |p| {
            assert!(height_le(&x, k, p, &b(12)).unwrap());
            dup |= !seen.insert(p.clone());
        })
        .unwrap();
        assert!(!dup);
        assert_eq!(seen.len() as u128, hk_count(&x, k, 12, region));
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let x = var(2, &[1]);
    let l = LineBundleClass::new(2, 3);
    let one = count(&hk(&x, l, b(3000), Region::GoodOpen, 1)).unwrap();
    let four = count(&hk(&x, l, b(3000), Region::GoodOpen, 4)).unwrap();
    assert_eq!(one.count, four.count);
    assert_eq!(one.points_visited, four.points_visited);
}

#[test]
fn diagnostics_are_filled_in() {
    let x = var(2, &[0, 1]);
    let r = count(&hk(&x, anticanonical(&x), b(30), Region::Whole, 1)).unwrap();
    assert_eq!(r.count, 2080);
    assert_eq!(r.bound, "30");
    assert!(r.points_visited > 0);
    assert!(r.elapsed_seconds >= 0.0);
}

#[test]
fn sweep_is_monotone() {
    let x = var(2, &[1]);
    let req = hk(&x, LineBundleClass::new(1, 1), b(1), Region::GoodOpen, 1);
    let grid: Vec<BigRational> = [2, 4, 8, 16].iter().map(|&v| b(v)).collect();
    let rows = sweep(&req, &grid, Some(&|bf: f64| bf.powi(3))).unwrap();
    assert!(rows.windows(2).all(|w| w[0].count <= w[1].count));
    assert_eq!(rows[3].predicted, Some(4096.0));
    assert!(matches!(sweep(&req, &[b(3), b(2)], None), Err(EnumError::GridNotIncreasing)));
}

#[test]
fn exponent_fit_examples() {
    let cube: Vec<(f64, f64)> = (1..=6).map(|i| (i as f64 * 10.0, (i as f64 * 10.0).powi(3))).collect();
    let f = estimate_exponent(&cube).unwrap();
    assert!((f.slope - 3.0).abs() < 1e-12);

    let synthetic: Vec<(f64, f64)> = (10..=20).map(|k| 2f64.powi(k)).map(|x| (x, 5.0 * x * x.ln() + 2.0 * x)).collect();
    let g = fit_log_model(&synthetic, 1.0).unwrap();
    assert!((g.leading - 5.0).abs() < 1e-9 && (g.secondary - 2.0).abs() < 1e-8);

    assert!(matches!(estimate_exponent(&cube[..3]), Err(FitError::TooFewPoints { .. })));

    let plane: Vec<(f64, f64)> =
        (50..=150).step_by(25).map(|bound| (bound as f64, count_projective(2, 1, &b(bound)).unwrap() as f64)).collect();
    assert!((estimate_exponent(&plane).unwrap().slope - 3.0).abs() < 0.1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn partition_identity(t in 2usize..=3, raw in prop::collection::vec(0u64..=3, 1..=3), lambda in 1i64..=3, extra in 1i64..=4, bound in 1i64..=12) {
        let mut a = raw;
        a.sort();
        let x = HkVariety::new(t, a).unwrap();
        // keep the restriction big so all three regions are finite
        let l = LineBundleClass::new(lambda, lambda * x.a_max() as i64 + extra);
        let u = hk_count(&x, l, bound, Region::GoodOpen);
        let f = hk_count(&x, l, bound, Region::SubbundleF);
        prop_assert_eq!(hk_count(&x, l, bound, Region::Whole), u + f);
        prop_assert_eq!(f, count_direct(&x, l, &b(bound), Region::SubbundleF).unwrap());
        prop_assert_eq!(u, count_direct(&x, l, &b(bound), Region::GoodOpen).unwrap());
    }

    #[test]
    fn counts_are_monotone_in_the_bound(b1 in 1i64..40, b2 in 1i64..40) {
        let x = var(2, &[0, 1]);
        let k = anticanonical(&x);
        let (lo, hi) = (b1.min(b2), b1.max(b2));
        prop_assert!(hk_count(&x, k, lo, Region::Whole) <= hk_count(&x, k, hi, Region::Whole));
    }
}
