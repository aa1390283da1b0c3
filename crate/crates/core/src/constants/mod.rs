//! Leading constants of point counts, and the special functions behind them.

pub mod field;
pub mod special;
pub mod tables;

use std::f64::consts::PI;

use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::lattice::{for_each_primitive, Lead};
use crate::geometry::{
    anticanonical, exponents, fmt_rational, rational_to_f64, restrict_to_f, GeometryError, HkVariety, LineBundleClass, PoleCase,
    Restriction,
};
use crate::heights::Region;
use crate::quad::{integrate, QuadratureFailure};
pub use field::{FieldError, FieldInvariants, ZetaSource};
use special::{gamma, l_minus4, theta_tail, zeta, DomainError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstantsError {
    #[error("{0}")]
    Geometry(#[from] GeometryError),
    #[error("the count is infinite: {0}")]
    NotBig(String),
    #[error("too close to a pole: {0}")]
    TooCloseToPole(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
}

/// Which asymptotic formula produced a prediction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    /// Good open set of a twisted variety.
    TwistedOpen,
    /// Whole of an untwisted variety, a product of projective spaces.
    Product,
    /// Anticanonical height on the good open set.
    Anticanonical,
    /// Projective space with a power of the standard height.
    Schanuel,
    /// Sum or difference of the predictions of several strata.
    Combined,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    /// Exponent of `B`.
    pub exponent: Rational64,
    /// Exponent of `log B`.
    pub log_power: u32,
    pub constant: f64,
    pub case: Option<PoleCase>,
    pub source: Source,
}

impl AsymptoticPrediction {
    /// `C B^a (log B)^b`.
    pub fn eval(&self, bound: f64) -> f64 {
        self.constant * bound.powf(rational_to_f64(&self.exponent)) * bound.ln().powi(self.log_power as i32)
    }

    fn order(&self) -> (Rational64, u32) {
        (self.exponent, self.log_power)
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{:.8} B^{}", self.constant, fmt_rational(&self.exponent));
        if self.log_power > 0 {
            s.push_str(&format!(" log(B)^{}", self.log_power));
        }
        s
    }
}

/// `Z_{P^m}(s)` over the rationals for `s > m + 1`.
///
/// `m = 1` and `m = 3` use the sums of two and four squares:
/// `Z_{P^1}(s) = 2 zeta(s/2) L(-4, s/2) / zeta(s)` and
/// `Z_{P^3}(s) = 4 (1 - 4^{1 - s/2}) zeta(s/2) zeta(s/2 - 1) / zeta(s)`.
/// Other `m` go through [`zeta_p_theta`].
pub fn zeta_p_rational(m: i64, s: f64) -> Result<f64, ConstantsError> {
    match m {
        -1 => return Ok(0.0),
        0 => return Ok(1.0),
        _ if m < -1 => return Err(DomainError { function: "projective height zeta (dimension)", arg: m as f64 }.into()),
        _ => {}
    }
    if !(s > (m + 1) as f64) {
        return Err(ConstantsError::TooCloseToPole(format!("Z_P^{m}({s}) needs s > {}", m + 1)));
    }
    match m {
        1 => Ok(2.0 * zeta(s / 2.0)? * l_minus4(s / 2.0)? / zeta(s)?),
        3 => Ok(4.0 * (1.0 - 4f64.powf(1.0 - s / 2.0)) * zeta(s / 2.0)? * zeta(s / 2.0 - 1.0)? / zeta(s)?),
        _ => zeta_p_theta(m, s),
    }
}

/// `Z_{P^m}(s) = E(s/2) / (2 zeta(s))` with `E(w) = sum_{x in Z^k \ 0} |x|^{-2w}`, `k = m + 1`, evaluated from
/// `pi^{-w} Gamma(w) E(w) = int_1^inf (theta(t)^k - 1)(t^{w-1} + t^{k/2-w-1}) dt + 1/(w - k/2) - 1/w`,
/// which follows from the Mellin transform of the theta function and its functional equation.
pub fn zeta_p_theta(m: i64, s: f64) -> Result<f64, ConstantsError> {
    if m < 1 || !(s > (m + 1) as f64) {
        return Err(ConstantsError::TooCloseToPole(format!("Z_P^{m}({s}) needs m >= 1 and s > {}", m + 1)));
    }
    let k = (m + 1) as f64;
    let w = s / 2.0;
    let f = |t: f64| {
        let th = (k * (2.0 * theta_tail(t)).ln_1p()).exp_m1();
        th * (t.powf(w - 1.0) + t.powf(k / 2.0 - w - 1.0))
    };
    let upper = 30.0 + w;
    let q = integrate(&f, 1.0, upper, 1e-15)?;
    let e = PI.powf(w) / gamma(w)? * (q.value + 1.0 / (w - k / 2.0) - 1.0 / w);
    Ok(e / (2.0 * zeta(s)?))
}

/// Volume of the unit ball in `R^k`.
fn unit_ball_volume(k: usize) -> f64 {
    PI.powf(k as f64 / 2.0) / gamma(k as f64 / 2.0 + 1.0).unwrap()
}

/// Outcome of a truncated summation of a projective height zeta function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaPSum {
    /// Partial sum plus the leading-order estimate of the tail.
    pub value: f64,
    /// Rigorous bound on `|value - Z|`.
    pub tail_bound: f64,
    pub h_max: f64,
    pub points: u64,
}

/// Rigorous tail bound `kappa s / (s - k) H^{k - s}` for the points of height above `H >= 1`, `k = m + 1`.
///
/// Unit cubes around the lattice points of the ball of radius `H` lie in the ball of radius
/// `H + sqrt(k)/2`, so `#{x : |x| <= H} <= V_k (1 + sqrt(k)/2)^k H^k`, and a projective point has two
/// representatives, giving `N(P^m, H) <= kappa H^k` with `kappa = V_k (1 + sqrt(k)/2)^k / 2`.
/// Partial summation turns this into the stated bound on `sum_{H(P) > H} H(P)^{-s}`.
/// The added tail estimate is also in `[0, bound]`, so the bound covers the corrected value too.
pub fn zeta_p_tail_bound(m: i64, s: f64, h_max: f64) -> f64 {
    let k = (m + 1) as usize;
    let kappa = 0.5 * unit_ball_volume(k) * (1.0 + (k as f64).sqrt() / 2.0).powi(k as i32);
    kappa * s / (s - k as f64) * h_max.powf(k as f64 - s)
}

/// Direct sum of `|x|^{-s}` over canonical primitive `x` with `|x| <= h_max`, plus the tail estimate
/// `C k H^{k-s} / (s - k)` from the point count `N(P^m, H) ~ C H^k`.
pub fn zeta_p_truncated(m: i64, s: f64, h_max: f64) -> Result<ZetaPSum, ConstantsError> {
    if m < 1 || !(s > (m + 1) as f64) {
        return Err(ConstantsError::TooCloseToPole(format!("Z_P^{m}({s}) needs m >= 1 and s > {}", m + 1)));
    }
    let k = (m + 1) as usize;
    let limit = (h_max * h_max).floor() as u128;
    let mut partial = 0.0f64;
    let mut points = 0u64;
    let half = -s / 2.0;
    for_each_primitive(&vec![1u128; k], limit, Lead::Free, &mut |x| {
        let n: i128 = x.iter().map(|v| v * v).sum();
        partial += (n as f64).powf(half);
        points += 1;
    });
    let schanuel = schanuel_constant(m as usize, &FieldInvariants::rationals())?.constant;
    let estimate = schanuel * k as f64 * h_max.powf(k as f64 - s) / (s - k as f64);
    Ok(ZetaPSum { value: partial + estimate, tail_bound: zeta_p_tail_bound(m, s, h_max), h_max, points })
}

/// Largest number of points [`zeta_p_numeric`] is willing to sum.
pub const ZETA_P_POINT_BUDGET: f64 = 6e7;

/// `Z_{P^m}(s)` by direct summation, with `H_max` chosen so that the rigorous tail bound is below `tol`.
pub fn zeta_p_numeric(m: i64, s: f64, tol: f64) -> Result<ZetaPSum, ConstantsError> {
    match m {
        -1 => return Ok(ZetaPSum { value: 0.0, tail_bound: 0.0, h_max: 0.0, points: 0 }),
        0 => return Ok(ZetaPSum { value: 1.0, tail_bound: 0.0, h_max: 0.0, points: 1 }),
        _ => {}
    }
    if m < -1 || !(s > (m + 1) as f64) {
        return Err(ConstantsError::TooCloseToPole(format!("Z_P^{m}({s}) needs s > {}", m + 1)));
    }
    let k = (m + 1) as f64;
    // solve zeta_p_tail_bound(m, s, h) = tol for h
    let h = (zeta_p_tail_bound(m, s, 1.0) / tol).powf(1.0 / (s - k)).max(1.0) * (1.0 + 1e-12);
    let expected = 0.5 * unit_ball_volume(k as usize) * h.powf(k);
    if expected > ZETA_P_POINT_BUDGET {
        return Err(ConstantsError::TooCloseToPole(format!(
            "reaching tail bound {tol:e} for Z_P^{m}({s}) needs about {expected:.2e} points"
        )));
    }
    zeta_p_truncated(m, s, h)
}

/// Points of `P^n` of standard height at most `B` grow like `C B^{n+1}`.
pub fn schanuel_constant(n: usize, inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    let k = (n + 1) as f64;
    let c = inv.rh() / (k * inv.w as f64 * (inv.abs_disc as f64).powf(k / 2.0) * inv.xi(k)?);
    Ok(AsymptoticPrediction { exponent: Rational64::from_integer(n as i64 + 1), log_power: 0, constant: c, case: None, source: Schanuel })
}

use Source::*;

/// `H_{O(twist)} <= B` on `P^dim`: Schanuel's count at `B^{1/twist}`.
fn projective_prediction(dim: usize, twist: i64, inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    if twist <= 0 {
        return Err(ConstantsError::NotBig(format!("O({twist}) on P^{dim}")));
    }
    let mut p = schanuel_constant(dim, inv)?;
    p.exponent /= twist;
    Ok(p)
}

/// Equal-pole constant, shared by twisted and untwisted varieties.
fn double_pole_constant(x: &HkVariety, l: LineBundleClass, inv: &FieldInvariants) -> Result<f64, ConstantsError> {
    let (r, t) = (x.r() as f64, x.t() as f64);
    let d = x.dim() as f64;
    let w = inv.w as f64;
    Ok(inv.rh().powi(2) * (inv.abs_disc as f64).powf(-(d + 2.0) / 2.0)
        / (w * w * (r + 1.0) * l.mu as f64 * inv.xi(r + 1.0)? * inv.xi(t)?))
}

/// Good open set of a variety with `a_r > 0`.
fn twisted_open(x: &HkVariety, l: LineBundleClass, inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    let e = exponents(x, l)?;
    let (r, t) = (x.r() as i64, x.t() as i64);
    let w = inv.w as f64;
    let delta = inv.abs_disc as f64;
    let constant = match e.case {
        PoleCase::EqualCase => double_pole_constant(x, l, inv)?,
        PoleCase::LambdaDominates => {
            let arg = e.lambda_exp * l.mu + (x.a_sum() as i64) - (r + 1) * x.a_max() as i64;
            assert!(arg > Rational64::from_integer(t), "fiber-dominated pole must leave the base zeta in its half plane");
            inv.rh() * delta.powf(-(r + 1) as f64 / 2.0) / (w * (r + 1) as f64 * inv.xi((r + 1) as f64)?)
                * inv.zeta_p(t - 1, rational_to_f64(&arg))?
        }
        PoleCase::MuDominates => {
            let nx = x.n_max() as i64;
            let lm = e.mu_exp * l.lambda;
            let shifted = rational_to_f64(&(lm + nx - (r + 1)));
            if shifted <= 1.0 + 1e-9 {
                return Err(ConstantsError::TooCloseToPole(format!("completed zeta needed at {shifted}")));
            }
            let z = inv.zeta_p(nx - 1, shifted)? - inv.zeta_p(nx - 2, shifted)?;
            inv.rh() * delta.powf(-((t - nx + r + 1) as f64) / 2.0) * inv.xi(shifted)?
                / (w * x.anticanonical_mu() as f64 * inv.xi(rational_to_f64(&lm))? * inv.xi(t as f64)?)
                * z
        }
    };
    let source = if l == anticanonical(x) { Anticanonical } else { TwistedOpen };
    Ok(AsymptoticPrediction { exponent: e.a, log_power: e.log_power, constant, case: Some(e.case), source })
}

/// Whole of an untwisted variety `P^{t-1} x P^r`.
fn product_whole(x: &HkVariety, l: LineBundleClass, inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    let e = exponents(x, l)?;
    let (r, t) = (x.r() as i64, x.t() as i64);
    let w = inv.w as f64;
    let delta = inv.abs_disc as f64;
    let constant = match e.case {
        PoleCase::EqualCase => double_pole_constant(x, l, inv)?,
        PoleCase::LambdaDominates => {
            inv.rh() * delta.powf(-(r + 1) as f64 / 2.0) / (w * (r + 1) as f64 * inv.xi((r + 1) as f64)?)
                * inv.zeta_p(t - 1, rational_to_f64(&(e.lambda_exp * l.mu)))?
        }
        PoleCase::MuDominates => {
            inv.rh() * delta.powf(-t as f64 / 2.0) / (w * t as f64 * inv.xi(t as f64)?)
                * inv.zeta_p(r, rational_to_f64(&(e.mu_exp * l.lambda)))?
        }
    };
    Ok(AsymptoticPrediction { exponent: e.a, log_power: e.log_power, constant, case: Some(e.case), source: Product })
}

fn add(p: AsymptoticPrediction, q: AsymptoticPrediction) -> AsymptoticPrediction {
    match p.order().cmp(&q.order()) {
        std::cmp::Ordering::Greater => p,
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Equal => AsymptoticPrediction { constant: p.constant + q.constant, source: Combined, ..p },
    }
}

/// Asymptotic count on a region of `X` for the height attached to `L`.
///
/// `F` is predicted through its identification with a smaller variety or the base projective space; an
/// untwisted good open set is the whole variety minus `F`.
pub fn predict_region(
    x: &HkVariety,
    l: LineBundleClass,
    region: Region,
    inv: &FieldInvariants,
) -> Result<AsymptoticPrediction, ConstantsError> {
    if !l.is_big() {
        return Err(ConstantsError::NotBig(format!("{l} on {x}")));
    }
    match region {
        Region::SubbundleF => match restrict_to_f(x, l) {
            Restriction::Variety { variety, bundle } => predict_region(&variety, bundle, Region::Whole, inv),
            Restriction::ProjectiveSpace { dim, twist } => projective_prediction(dim, twist, inv),
        },
        Region::Whole if x.a_max() == 0 => {
            let mut p = product_whole(x, l, inv)?;
            if l == anticanonical(x) {
                p.source = Anticanonical;
            }
            Ok(p)
        }
        Region::Whole => Ok(add(twisted_open(x, l, inv)?, predict_region(x, l, Region::SubbundleF, inv)?)),
        Region::GoodOpen if x.a_max() > 0 => twisted_open(x, l, inv),
        Region::GoodOpen => {
            let whole = predict_region(x, l, Region::Whole, inv)?;
            let f = predict_region(x, l, Region::SubbundleF, inv)?;
            if whole.order() == f.order() {
                Ok(AsymptoticPrediction { constant: whole.constant - f.constant, source: Combined, ..whole })
            } else {
                Ok(whole)
            }
        }
    }
}

/// The natural prediction: the good open set when `a_r > 0`, the whole variety otherwise.
pub fn predict(x: &HkVariety, l: LineBundleClass, inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    let region = if x.a_max() > 0 { Region::GoodOpen } else { Region::Whole };
    predict_region(x, l, region, inv)
}

/// Closed form of the anticanonical constant `R^2 h^2 |D|^{-(d+2)/2} / (w^2 (r+1) mu_K xi(r+1) xi(t))`.
pub fn anticanonical_constant(x: &HkVariety, inv: &FieldInvariants) -> Result<f64, ConstantsError> {
    double_pole_constant(x, anticanonical(x), inv)
}

/// Predicted count as a function of the bound, for sweeps.
pub fn predictor(p: &AsymptoticPrediction) -> impl Fn(f64) -> f64 + '_ {
    move |b| p.eval(b)
}

pub fn exponent_f64(p: &AsymptoticPrediction) -> f64 {
    p.exponent.to_f64().unwrap_or(f64::NAN)
}
