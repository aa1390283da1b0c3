//! Browser bindings: predictions, count sweeps and the theta-count curve, each returned as JSON.

use hk_core::arakelov::{h0, phi};
use hk_core::constants::{predict, predict_region, FieldInvariants};
use hk_core::enumerate::{sweep, CountRequest, CountTarget, SweepRow};
use hk_core::geometry::fmt_rational;
use hk_core::literal::{parse_bundle, parse_rational, parse_variety};
use hk_core::{HkVariety, LineBundleClass, Region};
use num_traits::ToPrimitive;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest bound the page will count up to, to keep the tab responsive.
pub const MAX_BOUND: f64 = 2000.0;

#[derive(Debug, Clone, Serialize)]
pub struct Prediction {
    pub variety: String,
    pub bundle: String,
    pub constant: f64,
    pub exponent: String,
    pub log_power: u32,
    pub case: Option<String>,
    pub summary: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub h0: f64,
    pub phi: f64,
}

fn parse_target(variety: &str, bundle: &str, region: &str) -> Result<(HkVariety, LineBundleClass, Option<Region>), String> {
    let x = parse_variety(variety).map_err(|e| e.to_string())?;
    let l = parse_bundle(bundle).map_err(|e| e.to_string())?;
    let region = if region.trim().is_empty() { None } else { Some(region.parse()?) };
    Ok((x, l, region))
}

fn default_region(x: &HkVariety) -> Region {
    if x.a_max() > 0 {
        Region::GoodOpen
    } else {
        Region::Whole
    }
}

/// Leading term of the count; an empty `region` means the default one.
pub fn prediction(variety: &str, bundle: &str, region: &str) -> Result<Prediction, String> {
    let (x, l, region) = parse_target(variety, bundle, region)?;
    let inv = FieldInvariants::rationals();
    let p = match region {
        Some(r) => predict_region(&x, l, r, &inv),
        None => predict(&x, l, &inv),
    }
    .map_err(|e| e.to_string())?;
    Ok(Prediction {
        variety: x.to_string(),
        bundle: l.to_string(),
        constant: p.constant,
        exponent: fmt_rational(&p.exponent),
        log_power: p.log_power,
        case: p.case.map(|c| format!("{c:?}")),
        summary: p.describe(),
    })
}

/// Counts at each comma-separated bound, with the predicted count and ratio when the class is big on the region.
pub fn count_sweep(variety: &str, bundle: &str, region: &str, bounds: &str) -> Result<Vec<SweepRow>, String> {
    let (x, l, region) = parse_target(variety, bundle, region)?;
    let region = region.unwrap_or_else(|| default_region(&x));
    let grid = bounds
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_rational(s.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() {
        return Err("no bounds given".into());
    }
    if grid.iter().any(|b| b.to_f64().is_none_or(|v| v > MAX_BOUND)) {
        return Err(format!("bounds above {MAX_BOUND} are too slow for the page; use the command line tool"));
    }
    let p = predict_region(&x, l, region, &FieldInvariants::rationals()).ok();
    let f = p.as_ref().map(|p| move |b: f64| p.eval(b));
    let req = CountRequest { target: CountTarget::Hk { variety: x, bundle: l }, bound: grid[0].clone(), region, threads: 1 };
    sweep(&req, &grid, f.as_ref().map(|g| g as &dyn Fn(f64) -> f64)).map_err(|e| e.to_string())
}

/// Samples `h0` and the theta count `phi` on `steps + 1` evenly spaced points.
pub fn theta_curve(from: f64, to: f64, steps: usize) -> Result<Vec<CurvePoint>, String> {
    if !(from.is_finite() && to.is_finite() && from < to) || steps == 0 || steps > 10_000 {
        return Err("need finite from < to and 1 <= steps <= 10000".into());
    }
    Ok((0..=steps)
        .map(|i| {
            let x = from + (to - from) * i as f64 / steps as f64;
            CurvePoint { x, h0: h0(x), phi: phi(x) }
        })
        .collect())
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string())).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn predict_json(variety: &str, bundle: &str, region: &str) -> Result<String, JsValue> {
    to_js(prediction(variety, bundle, region))
}

#[wasm_bindgen]
pub fn sweep_json(variety: &str, bundle: &str, region: &str, bounds: &str) -> Result<String, JsValue> {
    to_js(count_sweep(variety, bundle, region, bounds))
}

#[wasm_bindgen]
pub fn theta_curve_json(from: f64, to: f64, steps: usize) -> Result<String, JsValue> {
    to_js(theta_curve(from, to, steps))
}
