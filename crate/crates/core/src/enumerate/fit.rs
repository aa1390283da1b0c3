//! Least-squares fits of counting data.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FitError {
    #[error("need at least {need} points with positive bound and count, got {got}")]
    TooFewPoints { need: usize, got: usize },
    #[error("the design matrix is singular")]
    Singular,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    /// Natural log of the coefficient in `N ~ e^{intercept} B^{slope}`.
    pub log_coefficient: f64,
}

/// Fits `log N = slope log B + c`.
pub fn estimate_exponent(data: &[(f64, f64)]) -> Result<ExponentFit, FitError> {
    let pts: Vec<(f64, f64)> = data.iter().filter(|(b, n)| *b > 0.0 && *n > 0.0).map(|(b, n)| (b.ln(), n.ln())).collect();
    let (slope, c) = linear_fit(&pts, 4)?;
    Ok(ExponentFit { slope, log_coefficient: c })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogModelFit {
    /// Coefficient of `B^a log B`.
    pub leading: f64,
    /// Coefficient of `B^a`.
    pub secondary: f64,
}

/// Fits `N = leading B^a log B + secondary B^a` for a known exponent `a`.
pub fn fit_log_model(data: &[(f64, f64)], a: f64) -> Result<LogModelFit, FitError> {
    let pts: Vec<(f64, f64)> = data.iter().filter(|(b, _)| *b > 1.0).map(|(b, n)| (b.ln(), n / b.powf(a))).collect();
    let (leading, secondary) = linear_fit(&pts, 4)?;
    Ok(LogModelFit { leading, secondary })
}

fn linear_fit(pts: &[(f64, f64)], need: usize) -> Result<(f64, f64), FitError> {
    if pts.len() < need {
        return Err(FitError::TooFewPoints { need, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx <= 1e-300 {
        return Err(FitError::Singular);
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_synthetic_models() {
        let data: Vec<(f64, f64)> = (1..8).map(|k| (2f64.powi(k), 3.0 * 2f64.powi(k).powf(1.5))).collect();
        let f = estimate_exponent(&data).unwrap();
        assert!((f.slope - 1.5).abs() < 1e-12);
        assert!((f.log_coefficient - 3f64.ln()).abs() < 1e-12);

        let data: Vec<(f64, f64)> = (5..15)
            .map(|k| {
                let b = 2f64.powi(k);
                (b, 0.6 * b * b.ln() + 0.25 * b)
            })
            .collect();
        let g = fit_log_model(&data, 1.0).unwrap();
        assert!((g.leading - 0.6).abs() < 1e-9 && (g.secondary - 0.25).abs() < 1e-9);
        assert!(matches!(estimate_exponent(&data[..3]), Err(FitError::TooFewPoints { .. })));
    }
}
