//! Text forms shared by the command line and the browser demo.
//!
//! * variety: `r,t:a1,...,ar`
//! * class: `lambda,mu`
//! * rational: `p/q`, an integer, or a decimal such as `12.5`
//! * point: `[q0:...:q_{t-1}];[y0:...:y_r]`

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::geometry::{HkVariety, LineBundleClass};
use crate::heights::{HkRationalPoint, ProjectivePoint};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse {what} from {input:?}: {reason}")]
pub struct ParseError {
    pub what: &'static str,
    pub input: String,
    pub reason: String,
}

fn err(what: &'static str, input: &str, reason: impl Into<String>) -> ParseError {
    ParseError { what, input: input.to_string(), reason: reason.into() }
}

pub fn parse_variety(s: &str) -> Result<HkVariety, ParseError> {
    let (head, tail) = s.trim().split_once(':').ok_or_else(|| err("variety", s, "expected `r,t:a1,...,ar`"))?;
    let (r, t) = head.split_once(',').ok_or_else(|| err("variety", s, "expected `r,t` before the colon"))?;
    let r: usize = r.trim().parse().map_err(|e| err("variety", s, format!("{e}")))?;
    let t: usize = t.trim().parse().map_err(|e| err("variety", s, format!("{e}")))?;
    let a =
        tail.split(',').map(|x| x.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>().map_err(|e| err("variety", s, format!("{e}")))?;
    if a.len() != r {
        return Err(err("variety", s, format!("r = {r} but {} twists given", a.len())));
    }
    HkVariety::new(t, a).map_err(|e| err("variety", s, e.to_string()))
}

pub fn parse_bundle(s: &str) -> Result<LineBundleClass, ParseError> {
    let (l, m) = s.trim().split_once(',').ok_or_else(|| err("line bundle", s, "expected `lambda,mu`"))?;
    let l: i64 = l.trim().parse().map_err(|e| err("line bundle", s, format!("{e}")))?;
    let m: i64 = m.trim().parse().map_err(|e| err("line bundle", s, format!("{e}")))?;
    Ok(LineBundleClass::new(l, m))
}

/// Exact conversion; decimals are read digit by digit, never through floating point.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let t = s.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err("rational", s, "bad numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| err("rational", s, "bad denominator"))?;
        if q.is_zero() {
            return Err(err("rational", s, "zero denominator"));
        }
        return Ok(BigRational::new(p, q));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err("rational", s, "expected p/q or a decimal"));
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap() };
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let v = BigRational::new(num, den);
    Ok(if neg { -v } else { v })
}

fn parse_coords(s: &str) -> Result<Vec<BigInt>, ParseError> {
    let inner = s.trim().strip_prefix('[').and_then(|x| x.strip_suffix(']')).ok_or_else(|| err("point", s, "expected [x0:...:xn]"))?;
    inner.split(':').map(|x| x.trim().parse::<BigInt>().map_err(|_| err("point", s, "bad coordinate"))).collect()
}

pub fn parse_projective_point(s: &str) -> Result<ProjectivePoint, ParseError> {
    let c = parse_coords(s)?;
    ProjectivePoint::from_integers(&c).map_err(|e| err("point", s, e.to_string()))
}

/// Parses `[base];[fiber]`; both halves are canonicalised.
pub fn parse_point(x: &HkVariety, s: &str) -> Result<HkRationalPoint, ParseError> {
    let (b, f) = s.split_once(';').ok_or_else(|| err("point", s, "expected [base];[fiber]"))?;
    let base = parse_projective_point(b)?;
    let fiber = parse_projective_point(f)?;
    HkRationalPoint::new(x, base, fiber).map_err(|e| err("point", s, e.to_string()))
}

pub fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variety_round_trip() {
        let x = parse_variety("2,2:0,1").unwrap();
        assert_eq!(x.t(), 2);
        assert_eq!(x.a(), &[0, 1]);
        assert_eq!(x.to_string(), "2,2:0,1");
        assert!(parse_variety("2,2:1").is_err());
        assert!(parse_variety("2,2:3,1").is_err());
        assert!(parse_variety("1,1:0").is_err());
    }

    #[test]
    fn rationals_are_exact() {
        assert_eq!(parse_rational("12.5").unwrap(), BigRational::new(25.into(), 2.into()));
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("0.1").unwrap(), BigRational::new(1.into(), 10.into()));
        assert_eq!(parse_rational("60").unwrap(), BigRational::from_integer(60.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e3").is_err());
    }
}
