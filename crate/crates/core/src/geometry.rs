//! Hirzebruch-Kleinschmidt varieties as toric varieties: fans, Picard data, exponents and strata.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("invalid variety data: {0}")]
    InvalidVariety(String),
    #[error("line bundle {0} is not big")]
    NotBig(LineBundleClass),
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

/// The projective bundle `P(O + O(a_1) + ... + O(a_r))` over `P^{t-1}`.
///
/// `a` is nondecreasing with nonnegative entries, `r = a.len() >= 1` and `t >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HkVariety {
    t: usize,
    a: Vec<u64>,
}

impl HkVariety {
    pub fn new(t: usize, a: Vec<u64>) -> Result<Self, GeometryError> {
        if a.is_empty() {
            return Err(GeometryError::InvalidVariety("the twist vector must be nonempty".into()));
        }
        if t < 2 {
            return Err(GeometryError::InvalidVariety(format!("base dimension t-1 must be positive, got t = {t}")));
        }
        if a.windows(2).any(|w| w[0] > w[1]) {
            return Err(GeometryError::InvalidVariety(format!("twists must be nondecreasing: {a:?}")));
        }
        Ok(HkVariety { t, a })
    }

    /// Rank of the bundle minus one, i.e. the fiber dimension.
    pub fn r(&self) -> usize {
        self.a.len()
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn dim(&self) -> usize {
        self.r() + self.t - 1
    }

    pub fn a_max(&self) -> u64 {
        *self.a.last().unwrap()
    }

    pub fn a_sum(&self) -> u64 {
        self.a.iter().sum()
    }

    /// Number of twists equal to the largest one.
    pub fn n_max(&self) -> usize {
        let m = self.a_max();
        self.a.iter().filter(|&&x| x == m).count()
    }

    /// Weights of the fiber coordinates `y_0..y_r` in the fiber height: `0, a_r - a_0, ..., a_r - a_{r-1}` with `a_0 = 0`.
    pub fn fiber_weights(&self) -> Vec<u64> {
        let m = self.a_max();
        let mut b = Vec::with_capacity(self.r() + 1);
        b.push(0);
        b.push(m);
        for i in 1..self.r() {
            b.push(m - self.a[i - 1]);
        }
        b
    }

    /// Degree of the anticanonical class on the base direction: `(r+1) a_r + t - |a|`.
    pub fn anticanonical_mu(&self) -> i64 {
        ((self.r() as u64 + 1) * self.a_max() + self.t as u64 - self.a_sum()) as i64
    }

    /// The variety obtained by dropping the largest twist (the base of the subbundle `F`).
    pub fn drop_last(&self) -> Option<HkVariety> {
        if self.r() < 2 {
            return None;
        }
        Some(HkVariety { t: self.t, a: self.a[..self.r() - 1].to_vec() })
    }
}

impl fmt::Display for HkVariety {
    /// Literal form `r,t:a1,...,ar`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a: Vec<String> = self.a.iter().map(|x| x.to_string()).collect();
        write!(f, "{},{}:{}", self.r(), self.t, a.join(","))
    }
}

/// A class `lambda h + mu f` in the Picard group, with `h` the tautological class and `f` the pulled-back hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineBundleClass {
    pub lambda: i64,
    pub mu: i64,
}

impl LineBundleClass {
    pub fn new(lambda: i64, mu: i64) -> Self {
        LineBundleClass { lambda, mu }
    }

    /// Big classes are exactly the interior of the effective cone spanned by `f` and the class of the last ray.
    pub fn is_big(&self) -> bool {
        self.lambda > 0 && self.mu > 0
    }
}

impl fmt::Display for LineBundleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lambda, self.mu)
    }
}

pub fn anticanonical(x: &HkVariety) -> LineBundleClass {
    LineBundleClass::new(x.r() as i64 + 1, x.anticanonical_mu())
}

/// Volume constant of the anticanonical class on the nef cone: `1 / ((r+1)((r+1) a_r + t - |a|))`.
pub fn alpha_constant(x: &HkVariety) -> Rational64 {
    Rational64::new(1, (x.r() as i64 + 1) * x.anticanonical_mu())
}

/// Ray kinds, in fan order: base rays `w_0..w_{t-1}` then fiber rays `e_0..e_r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RayKind {
    Base(usize),
    Fiber(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    /// Ray generators in `Z^{t-1} + Z^r`.
    pub rays: Vec<Vec<i64>>,
    pub kinds: Vec<RayKind>,
    /// Maximal cones as sorted lists of ray indices.
    pub maximal_cones: Vec<Vec<usize>>,
}

pub fn build_fan(x: &HkVariety) -> Fan {
    let (t, r) = (x.t(), x.r());
    let n = t - 1 + r;
    let am = x.a_max() as i64;
    let mut rays = Vec::with_capacity(t + r + 1);
    let mut kinds = Vec::with_capacity(t + r + 1);

    let mut w0 = vec![0i64; n];
    for c in w0.iter_mut().take(t - 1) {
        *c = -1;
    }
    // e_1 coefficient is -a_r (a_0 = 0), then a_{i-1} - a_r for e_i.
    w0[t - 1] = -am;
    for i in 2..=r {
        w0[t - 2 + i] = x.a()[i - 2] as i64 - am;
    }
    rays.push(w0);
    kinds.push(RayKind::Base(0));
    for i in 1..t {
        let mut v = vec![0i64; n];
        v[i - 1] = 1;
        rays.push(v);
        kinds.push(RayKind::Base(i));
    }
    let mut e0 = vec![0i64; n];
    for c in e0.iter_mut().skip(t - 1) {
        *c = -1;
    }
    rays.push(e0);
    kinds.push(RayKind::Fiber(0));
    for i in 1..=r {
        let mut v = vec![0i64; n];
        v[t - 2 + i] = 1;
        rays.push(v);
        kinds.push(RayKind::Fiber(i));
    }

    let mut maximal_cones = Vec::with_capacity(t * (r + 1));
    for j in 0..t {
        for i in 0..=r {
            let cone: Vec<usize> = (0..t).filter(|&k| k != j).chain((0..=r).filter(|&k| k != i).map(|k| t + k)).collect();
            maximal_cones.push(cone);
        }
    }
    Fan { rays, kinds, maximal_cones }
}

impl Fan {
    pub fn ambient_dim(&self) -> usize {
        self.rays[0].len()
    }

    /// Determinant of the ray generators of a cone, which must be full dimensional.
    pub fn cone_determinant(&self, cone: &[usize]) -> i128 {
        let m: Vec<Vec<i128>> = cone.iter().map(|&i| self.rays[i].iter().map(|&c| c as i128).collect()).collect();
        integer_determinant(m)
    }

    pub fn is_unimodular(&self) -> bool {
        self.maximal_cones.iter().all(|c| self.cone_determinant(c).abs() == 1)
    }

    /// Picard class of the torus-invariant divisor attached to each ray, as `(lambda, mu)`.
    ///
    /// Base divisors are all `f`, the divisor of `e_0` is `h` and that of `e_j` is `h + (a_r - a_{j-1}) f`.
    pub fn divisor_classes(&self, x: &HkVariety) -> Vec<LineBundleClass> {
        let w = x.fiber_weights();
        self.kinds
            .iter()
            .map(|k| match *k {
                RayKind::Base(_) => LineBundleClass::new(0, 1),
                RayKind::Fiber(j) => LineBundleClass::new(1, w[j] as i64),
            })
            .collect()
    }
}

/// Bareiss fraction-free elimination.
fn integer_determinant(mut m: Vec<Vec<i128>>) -> i128 {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Where the subbundle `F = P(O(a_r)^{...})`-side divisor lands, with the restricted class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    /// `r >= 2`: `F` is the variety with the last twist dropped.
    Variety { variety: HkVariety, bundle: LineBundleClass },
    /// `r = 1`: `F` is `P^{dim}` and the class restricts to `O(twist)`.
    ProjectiveSpace { dim: usize, twist: i64 },
}

impl Restriction {
    pub fn is_big(&self) -> bool {
        match self {
            Restriction::Variety { bundle, .. } => bundle.is_big(),
            Restriction::ProjectiveSpace { twist, .. } => *twist > 0,
        }
    }
}

pub fn restrict_to_f(x: &HkVariety, l: LineBundleClass) -> Restriction {
    let r = x.r();
    let am = x.a_max() as i64;
    match x.drop_last() {
        Some(v) => {
            let prev = x.a()[r - 2] as i64;
            Restriction::Variety { variety: v, bundle: LineBundleClass::new(l.lambda, l.mu - l.lambda * (am - prev)) }
        }
        None => Restriction::ProjectiveSpace { dim: x.t() - 1, twist: l.mu - am * l.lambda },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PoleCase {
    EqualCase,
    LambdaDominates,
    MuDominates,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentData {
    /// `(r+1)/lambda`, the pole of the fiber direction.
    pub lambda_exp: Rational64,
    /// `((r+1) a_r + t - |a|)/mu`, the pole of the base direction.
    pub mu_exp: Rational64,
    /// Growth exponent, the larger of the two.
    pub a: Rational64,
    /// Power of `log B`: one when both poles coincide.
    pub log_power: u32,
    pub case: PoleCase,
}

pub fn exponents(x: &HkVariety, l: LineBundleClass) -> Result<ExponentData, GeometryError> {
    if !l.is_big() {
        return Err(GeometryError::NotBig(l));
    }
    let lambda_exp = Rational64::new(x.r() as i64 + 1, l.lambda);
    let mu_exp = Rational64::new(x.anticanonical_mu(), l.mu);
    let (a, log_power, case) = match lambda_exp.cmp(&mu_exp) {
        std::cmp::Ordering::Equal => (lambda_exp, 1, PoleCase::EqualCase),
        std::cmp::Ordering::Greater => (lambda_exp, 0, PoleCase::LambdaDominates),
        std::cmp::Ordering::Less => (mu_exp, 0, PoleCase::MuDominates),
    };
    Ok(ExponentData { lambda_exp, mu_exp, a, log_power, case })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StratumKind {
    /// The open set `y_0 != 0` of a Hirzebruch-Kleinschmidt variety.
    GoodOpen(HkVariety),
    ProjectiveSpace {
        dim: usize,
    },
    /// `P^{base_dim} x P^{fiber_dim}`, the whole of an untwisted variety.
    Product {
        base_dim: usize,
        fiber_dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratum {
    pub kind: StratumKind,
    /// Restricted class; for projective space only `mu` is meaningful.
    pub bundle: LineBundleClass,
    pub big: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecompositionMode {
    /// Peel off good open sets down to the base projective space.
    Full,
    /// Stop at the first untwisted variety `P^{t-1} x P^j`.
    StopAtProduct,
}

/// Disjoint strata covering the variety, listed from the open dense one downwards.
pub fn decompose(x: &HkVariety, l: LineBundleClass, mode: DecompositionMode) -> Vec<Stratum> {
    let mut out = Vec::new();
    let mut cur = x.clone();
    let mut bundle = l;
    loop {
        if mode == DecompositionMode::StopAtProduct && cur.a_max() == 0 {
            out.push(Stratum { kind: StratumKind::Product { base_dim: cur.t() - 1, fiber_dim: cur.r() }, bundle, big: bundle.is_big() });
            return out;
        }
        out.push(Stratum { kind: StratumKind::GoodOpen(cur.clone()), bundle, big: bundle.is_big() });
        match restrict_to_f(&cur, bundle) {
            Restriction::Variety { variety, bundle: b } => {
                cur = variety;
                bundle = b;
            }
            Restriction::ProjectiveSpace { dim, twist } => {
                out.push(Stratum { kind: StratumKind::ProjectiveSpace { dim }, bundle: LineBundleClass::new(0, twist), big: twist > 0 });
                return out;
            }
        }
    }
}

/// Whether the subbundle `F` is strongly accumulating: its base-direction pole exceeds both poles of the good open set.
pub fn strongly_accumulates(x: &HkVariety, l: LineBundleClass) -> Result<bool, GeometryError> {
    let e = exponents(x, l)?;
    if x.a_max() == 0 {
        return Err(GeometryError::NotApplicable("untwisted varieties have no distinguished subbundle".into()));
    }
    let restricted = restrict_to_f(x, l);
    if !restricted.is_big() {
        return Err(GeometryError::NotApplicable(format!("restriction of {l} to F is not big")));
    }
    let on_f = match restricted {
        Restriction::Variety { variety, bundle } => Rational64::new(variety.anticanonical_mu(), bundle.mu),
        Restriction::ProjectiveSpace { dim, twist } => Rational64::new(dim as i64 + 1, twist),
    };
    Ok(e.a < on_f)
}

/// Rational number as a reduced `p/q` string.
pub fn fmt_rational(q: &Rational64) -> String {
    if q.denom() == &1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational_to_f64(q: &Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}
