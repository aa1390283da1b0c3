//! Exact counts of rational points of bounded height.
//!
//! Counting goes base point by base point. For a base point `Q` the admissible fibers form the
//! primitive points of a diagonal ellipsoid whose shape depends on `Q` only through `|Q|^2`, so base
//! points are grouped by norm and each ellipsoid is counted once.

pub mod fit;
pub mod lattice;

use std::collections::BTreeMap;
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;
#[cfg(target_arch = "wasm32")]
use web_time::Instant;

use crate::geometry::{restrict_to_f, HkVariety, LineBundleClass, Restriction};
use crate::heights::{HkRationalPoint, ProjectivePoint, Region};
use lattice::{count_primitive, for_each_primitive, Lead};

pub use fit::{estimate_exponent, fit_log_model, ExponentFit, FitError, LogModelFit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("the class {0} is not big on the requested region, so the count is infinite")]
    NotBig(String),
    #[error("the bound must be positive")]
    NonPositiveBound,
    #[error("intermediate value exceeds 128 bits")]
    Overflow,
    #[error("thread pool: {0}")]
    ThreadPool(String),
    #[error("sweep grid must be strictly increasing")]
    GridNotIncreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CountTarget {
    Hk {
        variety: HkVariety,
        bundle: LineBundleClass,
    },
    /// Points of `P^dim` with `H_{O(twist)} <= B`.
    Projective {
        dim: usize,
        twist: i64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRequest {
    pub target: CountTarget,
    pub bound: BigRational,
    pub region: Region,
    /// Worker threads; zero means the runtime default.
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountResult {
    pub count: u128,
    pub region: Region,
    pub bound: String,
    pub elapsed_seconds: f64,
    /// Points enumerated in outer loops; each one triggers an analytic count of the inner lattice points.
    pub points_visited: u128,
}

/// Running count together with the number of outer points visited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Tally {
    count: u128,
    visited: u128,
}

impl Tally {
    fn plus(self, o: Tally) -> Result<Tally, EnumError> {
        Ok(Tally { count: self.count.checked_add(o.count).ok_or(EnumError::Overflow)?, visited: self.visited + o.visited })
    }
}

fn to_u128(x: &BigInt) -> Result<u128, EnumError> {
    x.to_u128().ok_or(EnumError::Overflow)
}

fn checked_pow(base: u128, e: u64) -> Result<u128, EnumError> {
    let mut acc = 1u128;
    for _ in 0..e {
        acc = acc.checked_mul(base).ok_or(EnumError::Overflow)?;
    }
    Ok(acc)
}

/// Largest `n` with `n^e <= (num/den)^2`, i.e. with `n^{e/2} <= bound`.
fn norm_limit(bound: &BigRational, e: i64) -> Result<u128, EnumError> {
    let sq = (bound.numer() * bound.numer()) / (bound.denom() * bound.denom());
    to_u128(&sq.nth_root(e as u32))
}

/// Fiber threshold `T` for a base point of squared norm `nq`:
/// `sum_i |Q|^{2(bmax - b_i)} y_i^2 <= T` is equivalent to `H_L <= B`.
fn fiber_threshold(bound: &BigRational, l: LineBundleClass, bmax: u64, nq: u128) -> BigInt {
    let nq = BigInt::from(nq);
    let num = bound.numer() * bound.numer() * Pow::pow(&nq, l.lambda as u64 * bmax);
    let den = bound.denom() * bound.denom() * Pow::pow(&nq, l.mu as u64);
    (num / den).nth_root(l.lambda as u32)
}

fn fiber_coefficients(x: &HkVariety, nq: u128) -> Result<Vec<u128>, EnumError> {
    let bmax = x.a_max();
    x.fiber_weights().iter().map(|&b| checked_pow(nq, bmax - b)).collect()
}

/// Number of canonical base points of each squared norm up to `limit`.
fn base_norm_histogram(t: usize, limit: u128) -> BTreeMap<u128, u128> {
    norm_histogram(t, limit, Lead::Free)
}

fn run_in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, EnumError> {
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| EnumError::ThreadPool(e.to_string()))?;
        Ok(pool.install(f))
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        Ok(f())
    }
}

/// Sum of `mult * count(norm)` over the histogram, in parallel when available.
fn weighted_sum<F>(hist: &BTreeMap<u128, u128>, per_norm: F) -> Result<Tally, EnumError>
where
    F: Fn(u128) -> Result<u128, EnumError> + Sync,
{
    let items: Vec<(u128, u128)> = hist.iter().map(|(&n, &m)| (n, m)).collect();
    let visited = items.iter().map(|p| p.1).sum();
    let term = |&(n, m): &(u128, u128)| -> Result<u128, EnumError> { per_norm(n)?.checked_mul(m).ok_or(EnumError::Overflow) };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let count = items.par_iter().map(term).try_reduce(|| 0, |a, b| a.checked_add(b).ok_or(EnumError::Overflow))?;
        Ok(Tally { count, visited })
    }
    #[cfg(not(feature = "parallel"))]
    {
        let count = items.iter().map(term).try_fold(0u128, |a, b| a.checked_add(b?).ok_or(EnumError::Overflow))?;
        Ok(Tally { count, visited })
    }
}

/// Points of `P^dim` with `|x|^{twist} <= B`, i.e. `|x|^2 <= B^{2/twist}`.
pub fn count_projective(dim: usize, twist: i64, bound: &BigRational) -> Result<u128, EnumError> {
    projective_tally(dim, twist, bound).map(|t| t.count)
}

fn projective_tally(dim: usize, twist: i64, bound: &BigRational) -> Result<Tally, EnumError> {
    if !bound.is_positive() {
        return Err(EnumError::NonPositiveBound);
    }
    if twist <= 0 {
        return Err(EnumError::NotBig(format!("O({twist}) on P^{dim}")));
    }
    let limit = norm_limit(bound, twist)?;
    let k = dim + 1;
    // the counter walks all but the last coordinate
    let visited = if k == 1 { 1 } else { (limit as f64).sqrt().powi(k as i32 - 1) as u128 };
    Ok(Tally { count: count_primitive(&vec![1u128; k], limit, Lead::Free), visited })
}

/// Independent count of `P^n(Q)` points with `|x| <= B` by Moebius inversion over all lattice points of the ball.
pub fn count_projective_moebius(n: usize, bound: &BigRational) -> u128 {
    let sq = (bound.numer() * bound.numer()) / (bound.denom() * bound.denom());
    let r2 = sq.to_u128().expect("bound too large for the Moebius oracle");
    let mut total: i128 = 0;
    let mut d = 1u128;
    while d * d <= r2 {
        let mu = moebius(d);
        if mu != 0 {
            total += mu as i128 * (ball_count(n + 1, r2 / (d * d)) as i128 - 1);
        }
        d += 1;
    }
    (total / 2) as u128
}

fn moebius(mut n: u128) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Lattice points of `Z^dim` with squared norm at most `r2`, origin included.
fn ball_count(dim: usize, r2: u128) -> u128 {
    if dim == 0 {
        return 1;
    }
    let m = r2.isqrt();
    let mut total = ball_count(dim - 1, r2);
    for x in 1..=m {
        total += 2 * ball_count(dim - 1, r2 - x * x);
    }
    total
}

fn require_big(l: LineBundleClass) -> Result<(), EnumError> {
    if l.is_big() {
        Ok(())
    } else {
        Err(EnumError::NotBig(l.to_string()))
    }
}

/// Canonical primitive points of `Z^k` grouped by squared norm, for the given sign convention.
fn norm_histogram(k: usize, limit: u128, lead: Lead) -> BTreeMap<u128, u128> {
    let mut h = BTreeMap::new();
    for_each_primitive(&vec![1u128; k], limit, lead, &mut |q| {
        let n: u128 = q.iter().map(|v| (v * v) as u128).sum();
        *h.entry(n).or_insert(0) += 1;
    });
    h
}

/// Untwisted varieties: the height is `|y|^lambda |Q|^mu`, so the roles of base and fiber can be swapped.
/// The side with fewer candidate points is enumerated and the other side is counted.
fn count_product(x: &HkVariety, l: LineBundleClass, bound: &BigRational, lead: Lead) -> Result<Tally, EnumError> {
    let (r, t) = (x.r(), x.t());
    let base_limit = norm_limit(bound, l.mu)?;
    let fiber_limit = norm_limit(bound, l.lambda)?;
    let base_work = (base_limit as f64).powf(t as f64 / 2.0);
    let fiber_work = (fiber_limit as f64).powf((r + 1) as f64 / 2.0);
    let sq = bound.numer() * bound.numer();
    let den = bound.denom() * bound.denom();
    if fiber_work < base_work {
        let hist = norm_histogram(r + 1, fiber_limit, lead);
        weighted_sum(&hist, |ny| {
            let lim = (&sq / (&den * Pow::pow(&BigInt::from(ny), l.lambda as u64))).nth_root(l.mu as u32);
            Ok(count_primitive(&vec![1u128; t], to_u128(&lim)?, Lead::Free))
        })
    } else {
        let hist = norm_histogram(t, base_limit, Lead::Free);
        weighted_sum(&hist, |nq| {
            let lim = (&sq / (&den * Pow::pow(&BigInt::from(nq), l.mu as u64))).nth_root(l.lambda as u32);
            Ok(count_primitive(&vec![1u128; r + 1], to_u128(&lim)?, lead))
        })
    }
}

/// Points with `y_0 != 0`.
fn count_good_open(x: &HkVariety, l: LineBundleClass, bound: &BigRational) -> Result<Tally, EnumError> {
    require_big(l)?;
    if x.a_max() == 0 {
        return count_product(x, l, bound, Lead::Positive);
    }
    let hist = base_norm_histogram(x.t(), norm_limit(bound, l.mu)?);
    let bmax = x.a_max();
    weighted_sum(&hist, |nq| {
        let c = fiber_coefficients(x, nq)?;
        let t = to_u128(&fiber_threshold(bound, l, bmax, nq))?;
        Ok(count_primitive(&c, t, Lead::Positive))
    })
}

/// Counts by reduction: `F` is identified with a smaller variety or with the base projective space.
fn count_subbundle(x: &HkVariety, l: LineBundleClass, bound: &BigRational) -> Result<Tally, EnumError> {
    match restrict_to_f(x, l) {
        Restriction::Variety { variety, bundle } => count_whole(&variety, bundle, bound),
        Restriction::ProjectiveSpace { dim, twist } => projective_tally(dim, twist, bound),
    }
}

fn count_whole(x: &HkVariety, l: LineBundleClass, bound: &BigRational) -> Result<Tally, EnumError> {
    count_good_open(x, l, bound)?.plus(count_subbundle(x, l, bound)?)
}

pub fn count(req: &CountRequest) -> Result<CountResult, EnumError> {
    if !req.bound.is_positive() {
        return Err(EnumError::NonPositiveBound);
    }
    let b = &req.bound;
    let start = Instant::now();
    let n = run_in_pool(req.threads, || match &req.target {
        CountTarget::Projective { dim, twist } => projective_tally(*dim, *twist, b),
        CountTarget::Hk { variety, bundle } => match req.region {
            Region::GoodOpen => count_good_open(variety, *bundle, b),
            Region::SubbundleF => count_subbundle(variety, *bundle, b),
            Region::Whole => count_whole(variety, *bundle, b),
        },
    })??;
    Ok(CountResult {
        count: n.count,
        region: req.region,
        bound: crate::literal::rational_to_string(b),
        elapsed_seconds: start.elapsed().as_secs_f64(),
        points_visited: n.visited,
    })
}

/// Base-point range guaranteeing that every point of the region with `H_L <= B` is seen.
///
/// On `F` the fiber weight of `y_i` lowers the exponent of `|Q|` to `mu - lambda b_i`; the smallest such
/// exponent over the allowed coordinates bounds `|Q|`.
fn direct_base_exponent(x: &HkVariety, l: LineBundleClass, region: Region) -> Result<i64, EnumError> {
    if l.lambda <= 0 {
        return Err(EnumError::NotBig(l.to_string()));
    }
    let e = match region {
        Region::GoodOpen => l.mu,
        Region::SubbundleF | Region::Whole => l.mu - l.lambda * x.a_max() as i64,
    };
    if e <= 0 || l.mu <= 0 {
        return Err(EnumError::NotBig(format!("{l} on {region:?}")));
    }
    Ok(e)
}

/// Counts the region directly from the height inequality, without reducing `F` to smaller varieties.
pub fn count_direct(x: &HkVariety, l: LineBundleClass, bound: &BigRational, region: Region) -> Result<u128, EnumError> {
    if !bound.is_positive() {
        return Err(EnumError::NonPositiveBound);
    }
    let e = direct_base_exponent(x, l, region)?;
    let hist = base_norm_histogram(x.t(), norm_limit(bound, e)?);
    let lead = match region {
        Region::GoodOpen => Lead::Positive,
        Region::SubbundleF => Lead::Zero,
        Region::Whole => Lead::Free,
    };
    let bmax = x.a_max();
    let mut total = 0u128;
    for (&nq, &mult) in &hist {
        let c = fiber_coefficients(x, nq)?;
        let t = to_u128(&fiber_threshold(bound, l, bmax, nq))?;
        total += mult * count_primitive(&c, t, lead);
    }
    Ok(total)
}

/// Streams every point of the region with `H_L <= B`, base points in lexicographic order.
pub fn for_each_point(
    x: &HkVariety,
    l: LineBundleClass,
    bound: &BigRational,
    region: Region,
    visit: &mut dyn FnMut(&HkRationalPoint),
) -> Result<(), EnumError> {
    if !bound.is_positive() {
        return Err(EnumError::NonPositiveBound);
    }
    let e = direct_base_exponent(x, l, region)?;
    let lead = match region {
        Region::GoodOpen => Lead::Positive,
        Region::SubbundleF => Lead::Zero,
        Region::Whole => Lead::Free,
    };
    let bmax = x.a_max();
    let mut bases = Vec::new();
    for_each_primitive(&vec![1u128; x.t()], norm_limit(bound, e)?, Lead::Free, &mut |q| bases.push(q.to_vec()));
    for q in bases {
        let nq: u128 = q.iter().map(|v| (v * v) as u128).sum();
        let c = fiber_coefficients(x, nq)?;
        let t = to_u128(&fiber_threshold(bound, l, bmax, nq))?;
        let base = ProjectivePoint::from_integers(&q.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()).unwrap();
        for_each_primitive(&c, t, lead, &mut |y| {
            let fiber = ProjectivePoint::from_integers(&y.iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>()).unwrap();
            visit(&HkRationalPoint { base: base.clone(), fiber });
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub bound: String,
    pub count: u128,
    pub predicted: Option<f64>,
    pub ratio: Option<f64>,
}

/// Counts at each bound of the grid; `predictor` maps a bound to the predicted count.
pub fn sweep(req: &CountRequest, grid: &[BigRational], predictor: Option<&dyn Fn(f64) -> f64>) -> Result<Vec<SweepRow>, EnumError> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(EnumError::GridNotIncreasing);
    }
    grid.iter()
        .map(|b| {
            let r = count(&CountRequest { bound: b.clone(), ..req.clone() })?;
            let bf = b.to_f64().unwrap_or(f64::NAN);
            let predicted = predictor.map(|p| p(bf));
            Ok(SweepRow { bound: r.bound, count: r.count, predicted, ratio: predicted.map(|p| r.count as f64 / p) })
        })
        .collect()
}
