//! Exact heights of rational points. Everything is kept as integers or exact rationals.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{HkVariety, LineBundleClass};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HeightError {
    #[error("all coordinates are zero")]
    AllZero,
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("the point does not lie on the subbundle F")]
    NotOnF,
    #[error("a height bound must be positive")]
    NonPositiveBound,
}

/// A point of projective space as its primitive integer representative whose first nonzero coordinate is positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjectivePoint {
    coords: Vec<BigInt>,
}

impl ProjectivePoint {
    pub fn from_integers(c: &[BigInt]) -> Result<Self, HeightError> {
        let g = c.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if g.is_zero() {
            return Err(HeightError::AllZero);
        }
        let first_negative = c.iter().find(|x| !x.is_zero()).unwrap().is_negative();
        let g = if first_negative { -g } else { g };
        Ok(ProjectivePoint { coords: c.iter().map(|x| x / &g).collect() })
    }

    pub fn from_i64(c: &[i64]) -> Result<Self, HeightError> {
        Self::from_integers(&c.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// Sum of squares of the canonical coordinates.
    pub fn norm_sq(&self) -> BigInt {
        self.coords.iter().map(|x| x * x).sum()
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", c.join(":"))
    }
}

/// Clears denominators and reduces to the canonical representative.
pub fn canonicalize(v: &[BigRational]) -> Result<ProjectivePoint, HeightError> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    ProjectivePoint::from_integers(&ints)
}

/// A rational point given by a base point in `P^{t-1}` and a fiber point in `P^r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HkRationalPoint {
    pub base: ProjectivePoint,
    pub fiber: ProjectivePoint,
}

impl HkRationalPoint {
    pub fn new(x: &HkVariety, base: ProjectivePoint, fiber: ProjectivePoint) -> Result<Self, HeightError> {
        if base.len() != x.t() {
            return Err(HeightError::WrongLength { expected: x.t(), got: base.len() });
        }
        if fiber.len() != x.r() + 1 {
            return Err(HeightError::WrongLength { expected: x.r() + 1, got: fiber.len() });
        }
        Ok(HkRationalPoint { base, fiber })
    }
}

impl fmt::Display for HkRationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{}", self.base, self.fiber)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// Points with `y_0 != 0`.
    GoodOpen,
    /// Points with `y_0 = 0`.
    SubbundleF,
    Whole,
}

impl std::str::FromStr for Region {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "u" | "open" | "goodopen" | "good-open" => Ok(Region::GoodOpen),
            "f" | "subbundle" | "subbundlef" => Ok(Region::SubbundleF),
            "x" | "whole" | "all" => Ok(Region::Whole),
            _ => Err(format!("unknown region {s:?}; expected U, F or X")),
        }
    }
}

pub fn region_of(p: &HkRationalPoint) -> Region {
    if p.fiber.coords()[0].is_zero() {
        Region::SubbundleF
    } else {
        Region::GoodOpen
    }
}

pub fn base_height_sq(q: &ProjectivePoint) -> BigInt {
    q.norm_sq()
}

fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    Pow::pow(x.clone(), e as i32)
}

/// `sum_i y_i^2 |Q|^{-2 b_i}` with the fiber weights `b`.
pub fn fiber_height_sq(x: &HkVariety, p: &HkRationalPoint) -> BigRational {
    let nq = BigRational::from_integer(p.base.norm_sq());
    x.fiber_weights().iter().zip(p.fiber.coords()).map(|(&b, y)| BigRational::from_integer(y * y) / rat_pow(&nq, b as i64)).sum()
}

/// Square of the height attached to `lambda h + mu f`.
pub fn height_sq(x: &HkVariety, l: LineBundleClass, p: &HkRationalPoint) -> BigRational {
    let nq = BigRational::from_integer(p.base.norm_sq());
    rat_pow(&fiber_height_sq(x, p), l.lambda) * rat_pow(&nq, l.mu)
}

/// Exact test of `H_L(p) <= bound`.
///
/// For nonnegative classes this avoids rationals entirely:
/// `S^lambda |Q|^{2 mu} den^2 <= num^2 |Q|^{2 lambda bmax}` where `S = sum y_i^2 |Q|^{2(bmax - b_i)}`.
pub fn height_le(x: &HkVariety, l: LineBundleClass, p: &HkRationalPoint, bound: &BigRational) -> Result<bool, HeightError> {
    if !bound.is_positive() {
        return Err(HeightError::NonPositiveBound);
    }
    if l.lambda < 0 || l.mu < 0 {
        return Ok(height_sq(x, l, p) <= bound * bound);
    }
    let nq = p.base.norm_sq();
    let w = x.fiber_weights();
    let bmax = x.a_max();
    let s: BigInt = w.iter().zip(p.fiber.coords()).map(|(&b, y)| y * y * Pow::pow(&nq, bmax - b)).sum();
    let lhs = Pow::pow(&s, l.lambda as u64) * Pow::pow(&nq, l.mu as u64) * bound.denom() * bound.denom();
    let rhs = bound.numer() * bound.numer() * Pow::pow(&nq, l.lambda as u64 * bmax);
    Ok(lhs <= rhs)
}

/// Square of the height of `O(m)` on projective space.
pub fn projective_height_sq(q: &ProjectivePoint, twist: i64) -> BigRational {
    rat_pow(&BigRational::from_integer(q.norm_sq()), twist)
}

/// Image of a point of `F` on the smaller variety (or base projective space) it identifies with.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RestrictedPoint {
    Variety(HkVariety, HkRationalPoint),
    Projective(ProjectivePoint),
}

/// For `r >= 2` the fiber `(0, y_1, .., y_r)` becomes `(y_r, y_1, .., y_{r-1})`:
/// after dividing by `|Q|^{-2 b_r}` the last coordinate is the one of weight zero.
pub fn restrict_point(x: &HkVariety, p: &HkRationalPoint) -> Result<RestrictedPoint, HeightError> {
    if region_of(p) != Region::SubbundleF {
        return Err(HeightError::NotOnF);
    }
    match x.drop_last() {
        None => Ok(RestrictedPoint::Projective(p.base.clone())),
        Some(v) => {
            let y = p.fiber.coords();
            let r = x.r();
            let mut f = Vec::with_capacity(r);
            f.push(y[r].clone());
            f.extend_from_slice(&y[1..r]);
            let fiber = ProjectivePoint::from_integers(&f)?;
            let q = HkRationalPoint::new(&v, p.base.clone(), fiber)?;
            Ok(RestrictedPoint::Variety(v, q))
        }
    }
}
