//! Serializable records emitted by the subcommands.

use hk_core::constants::AsymptoticPrediction;
use hk_core::geometry::{decompose, fmt_rational, DecompositionMode, Stratum, StratumKind};
use hk_core::{HkVariety, LineBundleClass, PoleCase};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StratumReport {
    pub stratum: String,
    pub bundle: String,
    pub big: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub variety: String,
    pub bundle: String,
    pub region: String,
    /// Growth exponent as a reduced fraction.
    pub a: String,
    pub log_exponent: u32,
    pub constant: f64,
    pub case: Option<PoleCase>,
    pub source: String,
    pub strata: Vec<StratumReport>,
}

fn stratum_name(s: &Stratum) -> String {
    match &s.kind {
        StratumKind::GoodOpen(v) => format!("U[{v}]"),
        StratumKind::ProjectiveSpace { dim } => format!("P^{dim}"),
        StratumKind::Product { base_dim, fiber_dim } => format!("P^{base_dim} x P^{fiber_dim}"),
    }
}

fn stratum_bundle(s: &Stratum) -> String {
    match s.kind {
        StratumKind::ProjectiveSpace { .. } => format!("O({})", s.bundle.mu),
        _ => s.bundle.to_string(),
    }
}

pub fn strata(x: &HkVariety, l: LineBundleClass) -> Vec<StratumReport> {
    decompose(x, l, DecompositionMode::Full)
        .iter()
        .map(|s| StratumReport { stratum: stratum_name(s), bundle: stratum_bundle(s), big: s.big })
        .collect()
}

impl PredictionReport {
    pub fn new(x: &HkVariety, l: LineBundleClass, region: &str, p: &AsymptoticPrediction) -> Self {
        PredictionReport {
            variety: x.to_string(),
            bundle: l.to_string(),
            region: region.to_string(),
            a: fmt_rational(&p.exponent),
            log_exponent: p.log_power,
            constant: p.constant,
            case: p.case,
            source: format!("{:?}", p.source),
            strata: strata(x, l),
        }
    }

    pub fn text(&self) -> String {
        let mut out = format!(
            "{} on {} ({}): C = {:.8}, a = {}, log = {}",
            self.bundle, self.variety, self.region, self.constant, self.a, self.log_exponent
        );
        if let Some(c) = self.case {
            out.push_str(&format!(", case {c:?}"));
        }
        out.push_str(&format!(", from {}\n", self.source));
        out.push_str(&strata_text(&self.strata));
        out
    }
}

pub fn strata_text(strata: &[StratumReport]) -> String {
    let mut out = String::from("strata:\n");
    for s in strata {
        let verdict = if s.big { "big" } else { "not big, infinitely many points of bounded height" };
        out.push_str(&format!("  {} with {}: {verdict}\n", s.stratum, s.bundle));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub observed: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn error(name: impl Into<String>, observed: f64, tolerance: f64) -> Self {
        Check { name: name.into(), observed, tolerance, pass: observed <= tolerance }
    }

    /// Exact comparison; `observed` is the absolute difference.
    pub fn exact(name: impl Into<String>, lhs: u128, rhs: u128) -> Self {
        Check { name: name.into(), observed: lhs.abs_diff(rhs) as f64, tolerance: 0.0, pass: lhs == rhs }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn new(suite: &str, checks: Vec<Check>) -> Self {
        VerifyReport { suite: suite.into(), pass: checks.iter().all(|c| c.pass), checks }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}: observed {:.3e}, tolerance {:.1e}\n", c.name, c.observed, c.tolerance));
        }
        out.push_str(&format!("suite {}: {}\n", self.suite, if self.pass { "pass" } else { "fail" }));
        out
    }
}
