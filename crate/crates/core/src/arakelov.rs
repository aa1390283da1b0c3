//! Theta invariants of Hermitian line bundles over the integers, and the integral identities they satisfy.
//!
//! Over the rationals an Arakelov divisor class is determined by its degree `x`; the corresponding
//! lattice is `Z` with `|1| = e^{-x}`. Its effectivity count is
//! `h0(x) = log sum_n exp(-pi n^2 e^{-2x})` and `phi(x) = e^{h0(x)} - 1`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constants::special::{gamma, l_minus4, theta_tail_direct, zeta};
use crate::constants::{zeta_p_numeric, zeta_p_rational, ConstantsError, FieldInvariants};
use crate::quad::{integrate_rel, QuadratureFailure};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArakelovError {
    #[error(transparent)]
    Quadrature(#[from] QuadratureFailure),
    #[error(transparent)]
    Constants(#[from] ConstantsError),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Above this degree the theta sum would need more than ~`10^4` terms; the Riemann-Roch functional
/// equation `h0(x) = x + h0(-x)` is used instead.
const DIRECT_LIMIT: f64 = 8.0;

/// `sum_{n >= 1} exp(-pi n^2 e^{-2x})`, summed directly for `x <= 8`.
fn theta_half(x: f64) -> f64 {
    theta_tail_direct((-2.0 * x).exp())
}

/// `h0(x) = log sum_{n in Z} exp(-pi n^2 e^{-2x})`.
pub fn h0(x: f64) -> f64 {
    if x > DIRECT_LIMIT {
        return x + h0(-x);
    }
    (2.0 * theta_half(x)).ln_1p()
}

/// `phi(x) = e^{h0(x)} - 1`, the number of nonzero effective sections.
pub fn phi(x: f64) -> f64 {
    if x > DIRECT_LIMIT {
        return x.exp() * (1.0 + phi(-x)) - 1.0;
    }
    2.0 * theta_half(x)
}

/// `phi(x) e^{pi e^{-2x}}`, computed without overflow for `x <= 0`.
pub fn phi_scaled(x: f64) -> f64 {
    let u = (-2.0 * x).exp();
    // 2 sum_n exp(-pi (n^2 - 1) u)
    let n0 = (45.0 / (PI * u)).sqrt().ceil() as u64 + 1;
    2.0 * (1..=n0).rev().map(|n| (-PI * ((n * n - 1) as f64) * u).exp()).sum::<f64>()
}

/// A constant `beta` with `phi(x) <= beta exp(-pi e^{-2x})` for all `x <= 0`:
/// with `u = e^{-2x} >= 1`, `phi = 2 sum exp(-pi n^2 u) <= 2 e^{-pi u} / (1 - e^{-3 pi})`.
pub fn decay_constant() -> f64 {
    2.0 / (1.0 - (-3.0 * PI).exp())
}

/// Split lattice `Z e_1 + ... + Z e_n` with `|e_i| = c_i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaledLatticeSum {
    scales: Vec<f64>,
}

impl ScaledLatticeSum {
    pub fn new(scales: Vec<f64>) -> Result<Self, ArakelovError> {
        if scales.is_empty() || scales.iter().any(|c| !(*c > 0.0)) {
            return Err(ArakelovError::Invalid("scales must be nonempty and positive".into()));
        }
        Ok(ScaledLatticeSum { scales })
    }

    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// `phi` of each summand after twisting by degree `x`: the summand `c_i e^{-x}` has degree `x - log c_i`.
    pub fn summand_phis(&self, x: f64) -> Vec<f64> {
        self.scales.iter().map(|c| phi(x - c.ln())).collect()
    }
}

/// `phi` of the twisted direct sum as `prod (1 + phi_i) - 1`.
pub fn phi_oplus(sum: &ScaledLatticeSum, x: f64) -> f64 {
    sum.summand_phis(x).iter().fold(1.0, |acc, p| acc * (1.0 + p)) - 1.0
}

/// The same quantity as `sigma_1 + ... + sigma_n`, the elementary symmetric polynomials of the `phi_i`.
pub fn phi_oplus_symmetric(sum: &ScaledLatticeSum, x: f64) -> f64 {
    let ps = sum.summand_phis(x);
    let mut e = vec![0.0; ps.len() + 1];
    e[0] = 1.0;
    for (i, p) in ps.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] += p * e[k - 1];
        }
    }
    e[1..].iter().sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralValue {
    pub value: f64,
    /// Quadrature error estimate plus the certified truncation bound.
    pub error: f64,
}

/// Bound on `int_{-inf}^{-x0} e^{-k x} phi(x)^j-type integrands`: for an integrand bounded by
/// `beta e^{-k x} exp(-pi e^{-2x})` on `x <= -x0`, substituting `v = e^{-2x}` gives
/// `(beta/2) int_{V}^inf v^{k/2 - 1} e^{-pi v} dv` with `V = e^{2 x0}`; for `pi V > k/2 - 1` that is at most
/// `(beta/2) V^{k/2-1} e^{-pi V} / (pi - (k/2 - 1)/V)`.
fn gaussian_tail_bound(beta: f64, k: f64, x0: f64) -> f64 {
    let v = (2.0 * x0).exp();
    let a = k / 2.0 - 1.0;
    let denom = PI - a.max(0.0) / v;
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    0.5 * beta * v.powf(a) * (-PI * v).exp() / denom
}

/// `int_{-inf}^0 e^{-kx} g(x) dx` where `0 <= g(x) <= beta exp(-pi e^{-2x})` on `x <= 0`.
///
/// `tol` is absolute; for large `k` the integral grows like `Gamma(k/2)` and the quadrature also stops at
/// relative error `1e-14`.
fn half_line_integral(g: &dyn Fn(f64) -> f64, k: f64, beta: f64, tol: f64) -> Result<IntegralValue, ArakelovError> {
    let mut x0 = 1.0;
    while gaussian_tail_bound(beta, k, x0) > tol / 4.0 {
        x0 += 0.25;
    }
    let f = |x: f64| (-k * x).exp() * g(x);
    let q = integrate_rel(&f, -x0, 0.0, tol / 2.0, 1e-14)?;
    Ok(IntegralValue { value: q.value, error: q.error + gaussian_tail_bound(beta, k, x0) })
}

/// `2 xi(s) = int_{-inf}^0 e^{-sx} phi dx + int_{-inf}^0 e^{(s-1)x} phi dx + 1/(s-1) - 1/s` over the rationals.
pub fn xi_integral(s: f64, tol: f64) -> Result<IntegralValue, ArakelovError> {
    if !(s > 1.0) {
        return Err(ArakelovError::Invalid(format!("s = {s} must exceed 1")));
    }
    let beta = decay_constant();
    let a = half_line_integral(&phi, s, beta, tol)?;
    let b = half_line_integral(&phi, 1.0 - s, beta, tol)?;
    Ok(IntegralValue { value: a.value + b.value + 1.0 / (s - 1.0) - 1.0 / s, error: a.error + b.error })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// Which evaluation of `Z_{P^n}(s)` enters the left side of [`projective_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZetaPEvaluation {
    /// Direct summation with a rigorous tail bound below the tolerance.
    Certified { tol: f64 },
    /// Direct summation up to a fixed height with the asymptotic tail estimate, no certificate.
    Truncated { h_max: f64 },
    /// Closed form or theta integral.
    Analytic,
}

/// `2 xi(s) Z_{P^n}(s)` against `int_{-inf}^0 (e^{-sx} + e^{(s-n-1)x}) ((1+phi)^{n+1} - 1) dx + 1/(s-n-1) - 1/s`.
pub fn projective_identity_check(n: usize, s: f64, quad_tol: f64, zeta_p: ZetaPEvaluation) -> Result<IdentityCheck, ArakelovError> {
    let k = (n + 1) as f64;
    if n == 0 || !(s > k) {
        return Err(ArakelovError::Invalid(format!("need n >= 1 and s > n + 1, got n = {n}, s = {s}")));
    }
    let xi2 = 2.0 * FieldInvariants::rationals().xi(s).map_err(ConstantsError::from)?;
    let z = match zeta_p {
        ZetaPEvaluation::Certified { tol } => zeta_p_numeric(n as i64, s, tol)?.value,
        ZetaPEvaluation::Truncated { h_max } => crate::constants::zeta_p_truncated(n as i64, s, h_max)?.value,
        ZetaPEvaluation::Analytic => zeta_p_rational(n as i64, s)?,
    };
    let lhs = xi2 * z;
    let g = |x: f64| (k * phi(x).ln_1p()).exp_m1();
    // (1+phi)^{n+1} - 1 <= (n+1) phi (1+phi)^n <= (n+1) (1+phi(0))^n beta exp(-pi e^{-2x})
    let beta = k * (1.0 + phi(0.0)).powf(k - 1.0) * decay_constant();
    let a = half_line_integral(&g, s, beta, quad_tol)?;
    let b = half_line_integral(&g, k - s, beta, quad_tol)?;
    let rhs = a.value + b.value + 1.0 / (s - k) - 1.0 / s;
    Ok(IdentityCheck { lhs, rhs, diff: (lhs - rhs).abs() })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidueEstimate {
    /// `(s-2) Z_{P^1}(s)` at `s = 2 + 10^{-k}`, `k = 1..=6`.
    pub samples: Vec<f64>,
    pub extrapolated: f64,
}

/// Residue of `Z_{P^1}` at `s = 2`, by Richardson extrapolation of `(s-2) Z(s)` along `s - 2 = 10^{-k}`.
pub fn height_zeta_residue_check() -> ResidueEstimate {
    let z = |s: f64| 2.0 * zeta(s / 2.0).unwrap() * l_minus4(s / 2.0).unwrap() / zeta(s).unwrap();
    let samples: Vec<f64> = (1..=6)
        .map(|k| {
            let e = 10f64.powi(-k);
            e * z(2.0 + e)
        })
        .collect();
    // each level removes the next power of the step, which shrinks tenfold between samples
    let mut t = samples.clone();
    for j in 1..samples.len() {
        let f = 10f64.powi(j as i32);
        t = t.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    ResidueEstimate { samples, extrapolated: t[0] }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayCheck {
    pub bounded: bool,
    /// Largest observed `phi(x) exp(pi e^{-2x})` on the grid.
    pub observed_beta: f64,
}

/// Checks that `phi(x) exp(pi e^{-2x})` stays below [`decay_constant`] on a grid of nonpositive degrees.
pub fn theta_decay_check(grid: &[f64]) -> Result<DecayCheck, ArakelovError> {
    if grid.iter().any(|x| *x > 0.0 || !x.is_finite()) {
        return Err(ArakelovError::Invalid("grid points must be finite and nonpositive".into()));
    }
    let observed_beta = grid.iter().map(|&x| phi_scaled(x)).fold(0.0, f64::max);
    Ok(DecayCheck { bounded: observed_beta <= decay_constant(), observed_beta })
}

/// `h0(0) = log(pi^{1/4} / Gamma(3/4))`.
pub fn h0_at_zero_closed_form() -> f64 {
    (PI.powf(0.25) / gamma(0.75).unwrap()).ln()
}
