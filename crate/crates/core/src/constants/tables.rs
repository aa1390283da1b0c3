//! Reference computations: the Hirzebruch surface with twist one, the threefold `X(0, a_1, a_2)` family and
//! the product `P^1 x P^1`.

use serde::{Deserialize, Serialize};

use super::{predict, predict_region, AsymptoticPrediction, ConstantsError, FieldInvariants};
use crate::geometry::{anticanonical, restrict_to_f, HkVariety, LineBundleClass, Restriction};
use crate::heights::Region;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceRow {
    pub lambda: i64,
    pub mu: i64,
    pub prediction: AsymptoticPrediction,
}

/// Good open set of the Hirzebruch surface with twist one, for `lambda, mu` in `1..=3`.
pub fn hirzebruch_table(inv: &FieldInvariants) -> Result<Vec<SurfaceRow>, ConstantsError> {
    let x = HkVariety::new(2, vec![1]).unwrap();
    let mut rows = Vec::new();
    for lambda in 1..=3 {
        for mu in 1..=3 {
            let prediction = predict(&x, LineBundleClass::new(lambda, mu), inv)?;
            rows.push(SurfaceRow { lambda, mu, prediction });
        }
    }
    Ok(rows)
}

/// One stratum of the threefold decomposition `X = U + U' + F'`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumGrowth {
    pub name: String,
    /// `None` when the height has infinitely many points of bounded height there.
    pub prediction: Option<AsymptoticPrediction>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThreefoldRow {
    pub case: String,
    pub a1: u64,
    pub a2: u64,
    /// Whether the anticanonical class restricted to `F` is big.
    pub restriction_big: bool,
    /// Whether its further restriction to the line `F'` is big.
    pub line_big: bool,
    pub strata: Vec<StratumGrowth>,
    /// Stratum with the fastest finite growth.
    pub dominant: String,
}

fn growth(p: Result<AsymptoticPrediction, ConstantsError>) -> Result<Option<AsymptoticPrediction>, ConstantsError> {
    match p {
        Ok(p) => Ok(Some(p)),
        Err(ConstantsError::NotBig(_)) | Err(ConstantsError::Geometry(crate::geometry::GeometryError::NotBig(_))) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Anticanonical height on the threefold `X(a1, a2)` over `P^1`, split along `U`, `U'` and `F'`.
pub fn threefold_row(case: &str, a1: u64, a2: u64, inv: &FieldInvariants) -> Result<ThreefoldRow, ConstantsError> {
    let x = HkVariety::new(2, vec![a1, a2]).unwrap();
    let k = anticanonical(&x);
    let (xp, l) = match restrict_to_f(&x, k) {
        Restriction::Variety { variety, bundle } => (variety, bundle),
        Restriction::ProjectiveSpace { .. } => unreachable!(),
    };
    let m = match restrict_to_f(&xp, l) {
        Restriction::ProjectiveSpace { twist, .. } => twist,
        Restriction::Variety { .. } => unreachable!(),
    };
    let strata = vec![
        StratumGrowth { name: "U".into(), prediction: growth(predict_region(&x, k, Region::GoodOpen, inv))? },
        StratumGrowth { name: "U'".into(), prediction: growth(predict_region(&xp, l, Region::GoodOpen, inv))? },
        StratumGrowth { name: "F'".into(), prediction: growth(predict_region(&xp, l, Region::SubbundleF, inv))? },
    ];
    let dominant = strata
        .iter()
        .filter_map(|s| s.prediction.as_ref().map(|p| (p.exponent, p.log_power, s.name.clone())))
        .max()
        .map(|t| t.2)
        .unwrap_or_default();
    Ok(ThreefoldRow { case: case.into(), a1, a2, restriction_big: l.is_big(), line_big: m > 0, strata, dominant })
}

/// One representative per case of the comparison table.
pub fn threefold_table(inv: &FieldInvariants) -> Result<Vec<ThreefoldRow>, ConstantsError> {
    [("(0,0)", 0, 0), ("(0,1)", 0, 1), ("1<=a1<a2<2a1+2", 1, 2), ("1<=a1=a2", 1, 1), ("2a1+2<=a2", 1, 4)]
        .iter()
        .map(|&(c, a1, a2)| threefold_row(c, a1, a2, inv))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThreefoldConstants {
    /// `U`, anticanonical double pole.
    pub open: f64,
    /// `U'`, the good open set of `F`.
    pub open_of_f: f64,
    /// `F'`, a line.
    pub line: f64,
}

/// The constants of the three strata of `X(0, 1)` over `P^1`.
pub fn threefold_constants(inv: &FieldInvariants) -> Result<ThreefoldConstants, ConstantsError> {
    let row = threefold_row("(0,1)", 0, 1, inv)?;
    let c = |i: usize| row.strata[i].prediction.as_ref().map(|p| p.constant).unwrap_or(f64::NAN);
    Ok(ThreefoldConstants { open: c(0), open_of_f: c(1), line: c(2) })
}

/// `P^1 x P^1` with the class `3h + f`.
pub fn product_example(inv: &FieldInvariants) -> Result<AsymptoticPrediction, ConstantsError> {
    predict(&HkVariety::new(2, vec![0]).unwrap(), LineBundleClass::new(3, 1), inv)
}
