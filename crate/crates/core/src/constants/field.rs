//! Arithmetic invariants of the base field, with a built-in model for the rationals.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::special::{gamma, zeta, DomainError};
use super::zeta_p_rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FieldError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("missing key {0}")]
    MissingKey(&'static str),
    #[error("invalid invariants: {0}")]
    Invalid(String),
    #[error("no tabulated value for {what} at s = {s}")]
    MissingValue { what: &'static str, s: f64 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// How the Dedekind zeta function (and the projective height zeta functions) are evaluated.
#[derive(Clone)]
pub enum ZetaSource {
    /// The rationals: Riemann zeta and the built-in projective height zeta functions.
    Riemann,
    /// Sampled values keyed by `s`; lookup requires an exact match up to `1e-9`.
    Table(Vec<(f64, f64)>),
    Callback(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for ZetaSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZetaSource::Riemann => write!(f, "Riemann"),
            ZetaSource::Table(t) => write!(f, "Table({} values)", t.len()),
            ZetaSource::Callback(_) => write!(f, "Callback"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct FieldInvariants {
    pub r1: u32,
    pub r2: u32,
    pub w: u64,
    pub abs_disc: u64,
    pub regulator: f64,
    pub class_number: u64,
    pub zeta_k: ZetaSource,
    /// Values of `Z_{P^m}(s)` keyed by `(m, s)`; required for fields other than the rationals.
    pub zeta_p: Vec<(i64, f64, f64)>,
}

fn lookup(table: &[(f64, f64)], s: f64) -> Option<f64> {
    table.iter().find(|(k, _)| (k - s).abs() <= 1e-9 * s.abs().max(1.0)).map(|&(_, v)| v)
}

impl FieldInvariants {
    pub fn rationals() -> Self {
        FieldInvariants {
            r1: 1,
            r2: 0,
            w: 2,
            abs_disc: 1,
            regulator: 1.0,
            class_number: 1,
            zeta_k: ZetaSource::Riemann,
            zeta_p: Vec::new(),
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self.zeta_k, ZetaSource::Riemann) && self.r1 == 1 && self.r2 == 0 && self.abs_disc == 1
    }

    pub fn degree(&self) -> u32 {
        self.r1 + 2 * self.r2
    }

    /// `R h`, the product of regulator and class number.
    pub fn rh(&self) -> f64 {
        self.regulator * self.class_number as f64
    }

    pub fn zeta_k(&self, s: f64) -> Result<f64, FieldError> {
        match &self.zeta_k {
            ZetaSource::Riemann => Ok(zeta(s)?),
            ZetaSource::Table(t) => lookup(t, s).ok_or(FieldError::MissingValue { what: "zetaK", s }),
            ZetaSource::Callback(f) => Ok(f(s)),
        }
    }

    /// Completed zeta `2^{-r1} (pi^{-s/2} Gamma(s/2))^{r1} ((2 pi)^{-s} Gamma(s))^{r2} zeta_K(s)`.
    pub fn xi(&self, s: f64) -> Result<f64, FieldError> {
        if !(s > 1.0) {
            return Err(FieldError::Domain(DomainError { function: "xi", arg: s }));
        }
        let real = 0.5 * std::f64::consts::PI.powf(-s / 2.0) * gamma(s / 2.0)?;
        let complex = (2.0 * std::f64::consts::PI).powf(-s) * gamma(s)?;
        Ok(real.powi(self.r1 as i32) * complex.powi(self.r2 as i32) * self.zeta_k(s)?)
    }

    /// Height zeta function of `P^m` with the conventions `Z_{P^0} = 1`, `Z_{P^{-1}} = 0`.
    pub fn zeta_p(&self, m: i64, s: f64) -> Result<f64, FieldError> {
        match m {
            -1 => return Ok(0.0),
            0 => return Ok(1.0),
            _ => {}
        }
        if matches!(self.zeta_k, ZetaSource::Riemann) {
            return zeta_p_rational(m, s).map_err(|e| FieldError::Invalid(e.to_string()));
        }
        self.zeta_p
            .iter()
            .find(|(mm, ss, _)| *mm == m && (ss - s).abs() <= 1e-9 * s.abs().max(1.0))
            .map(|&(_, _, v)| v)
            .ok_or(FieldError::MissingValue { what: "zetaP", s })
    }

    /// Reads `key=value` lines: `r1`, `r2`, `w`, `absDisc`, `regulator`, `classNumber`, and optional
    /// `zetaK.<s>=<value>` and `zetaP.<m>.<s>=<value>` samples. `#` starts a comment.
    /// Without any `zetaK` samples the rationals' zeta function is assumed, which is only accepted for the rationals.
    pub fn parse(text: &str) -> Result<Self, FieldError> {
        let mut f = FieldInvariants { zeta_k: ZetaSource::Table(Vec::new()), ..FieldInvariants::rationals() };
        let mut seen = [false; 6];
        let mut zk = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let perr = |reason: String| FieldError::Parse { line: i + 1, reason };
            let (k, v) = line.split_once('=').ok_or_else(|| perr("expected key=value".into()))?;
            let (k, v) = (k.trim(), v.trim());
            let int = |v: &str| v.parse::<u64>().map_err(|e| perr(format!("{k}: {e}")));
            let real = |v: &str| v.parse::<f64>().map_err(|e| perr(format!("{k}: {e}")));
            match k {
                "r1" => (f.r1, seen[0]) = (int(v)? as u32, true),
                "r2" => (f.r2, seen[1]) = (int(v)? as u32, true),
                "w" => (f.w, seen[2]) = (int(v)?, true),
                "absDisc" => (f.abs_disc, seen[3]) = (int(v)?, true),
                "regulator" => (f.regulator, seen[4]) = (real(v)?, true),
                "classNumber" => (f.class_number, seen[5]) = (int(v)?, true),
                _ => {
                    if let Some(s) = k.strip_prefix("zetaK.") {
                        zk.push((real(s)?, real(v)?));
                    } else if let Some(rest) = k.strip_prefix("zetaP.") {
                        let (m, s) = rest.split_once('.').ok_or_else(|| perr("expected zetaP.<m>.<s>".into()))?;
                        let m = m.parse::<i64>().map_err(|e| perr(format!("{k}: {e}")))?;
                        f.zeta_p.push((m, real(s)?, real(v)?));
                    } else {
                        return Err(perr(format!("unknown key {k}")));
                    }
                }
            }
        }
        const KEYS: [&str; 6] = ["r1", "r2", "w", "absDisc", "regulator", "classNumber"];
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(FieldError::MissingKey(KEYS[i]));
        }
        if f.degree() == 0 || f.w == 0 || f.abs_disc == 0 || f.class_number == 0 || !(f.regulator > 0.0) {
            return Err(FieldError::Invalid("need r1 + 2 r2 >= 1 and positive w, absDisc, regulator, classNumber".into()));
        }
        if zk.is_empty() {
            if f.r1 == 1 && f.r2 == 0 && f.abs_disc == 1 && f.w == 2 && f.class_number == 1 && f.regulator == 1.0 {
                f.zeta_k = ZetaSource::Riemann;
            } else {
                return Err(FieldError::Invalid("zetaK samples are required for fields other than the rationals".into()));
            }
        } else {
            f.zeta_k = ZetaSource::Table(zk);
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn completed_zeta_of_rationals() {
        let q = FieldInvariants::rationals();
        assert!((q.xi(2.0).unwrap() - PI / 12.0).abs() < 1e-15);
        assert!((q.xi(3.0).unwrap() - zeta(3.0).unwrap() / (4.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn parse_files() {
        let q = FieldInvariants::parse("r1=1\nr2=0\nw=2\nabsDisc=1\nregulator=1\nclassNumber=1\n").unwrap();
        assert!(q.is_rationals());
        let g = FieldInvariants::parse("r1=0\nr2=1\nw=4\nabsDisc=4\nregulator=1\nclassNumber=1\nzetaK.2=1.5067030099229865\n").unwrap();
        assert_eq!(g.degree(), 2);
        assert!((g.zeta_k(2.0).unwrap() - 1.5067030099229865).abs() < 1e-16);
        assert!(matches!(g.zeta_k(3.0), Err(FieldError::MissingValue { .. })));
        assert!(matches!(FieldInvariants::parse("r1=1\n"), Err(FieldError::MissingKey("r2"))));
        assert!(FieldInvariants::parse("r1=0\nr2=1\nw=4\nabsDisc=4\nregulator=1\nclassNumber=1\n").is_err());
    }
}
