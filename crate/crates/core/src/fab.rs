//! Silicon-on-nothing gap corrections.
//!
//! The released gap is modelled as affine in the drawn gap and the tunnel
//! depth: d = drawn + etch_bias + rate × depth. The default rate comes from
//! a single measurement (a 90 nm post-etch gap opening to 130 nm under a
//! 1.19 μm tunnel), so every report carries a single-point-calibration note.
//! Setting `etch_bias` to zero treats the drawn value as the post-etch gap,
//! which expresses the other reading of that measurement.
//!
//! Doping of the epitaxial layer is not modelled. For reference, the
//! process data quote about 5·10¹⁵ at/cm³ in the undoped silicon and
//! 3·10¹⁸ at/cm³ in the doped regions.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, Error, Result};
use crate::transducer::Transducer;
use crate::units::{QuantityInput, Unit};

/// Gap enlargement observed during release at the calibration point, m.
pub const CALIBRATION_ENLARGEMENT: f64 = 40e-9;
/// Tunnel depth at the calibration point, m.
pub const CALIBRATION_TUNNEL_DEPTH: f64 = 1.19e-6;
pub const DEFAULT_ETCH_BIAS: f64 = 10e-9;
pub const DEFAULT_MIN_DRAWN_GAP: f64 = 80e-9;
pub const DEFAULT_MAX_TUNNEL_DEPTH: f64 = 5e-6;

pub const CALIBRATION_NOTE: &str =
    "release enlargement rate is a single-point calibration (90 nm post-etch -> 130 nm at 1.19 um tunnel depth)";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProcessInput")]
pub struct ProcessModel {
    etch_bias: f64,
    release_enlargement_rate: f64,
    min_drawn_gap: f64,
    max_tunnel_depth: f64,
}

impl Default for ProcessModel {
    fn default() -> Self {
        Self {
            etch_bias: DEFAULT_ETCH_BIAS,
            release_enlargement_rate: CALIBRATION_ENLARGEMENT / CALIBRATION_TUNNEL_DEPTH,
            min_drawn_gap: DEFAULT_MIN_DRAWN_GAP,
            max_tunnel_depth: DEFAULT_MAX_TUNNEL_DEPTH,
        }
    }
}

impl ProcessModel {
    pub fn new(
        etch_bias: f64,
        release_enlargement_rate: f64,
        min_drawn_gap: f64,
        max_tunnel_depth: f64,
    ) -> Result<Self> {
        require_non_negative("etch_bias", etch_bias)?;
        require_non_negative("release_enlargement_rate", release_enlargement_rate)?;
        require_non_negative("min_drawn_gap", min_drawn_gap)?;
        require_non_negative("max_tunnel_depth", max_tunnel_depth)?;
        Ok(Self {
            etch_bias,
            release_enlargement_rate,
            min_drawn_gap,
            max_tunnel_depth,
        })
    }

    pub fn etch_bias(&self) -> f64 {
        self.etch_bias
    }

    /// Gap growth per metre of tunnel depth.
    pub fn release_enlargement_rate(&self) -> f64 {
        self.release_enlargement_rate
    }

    pub fn min_drawn_gap(&self) -> f64 {
        self.min_drawn_gap
    }

    pub fn max_tunnel_depth(&self) -> f64 {
        self.max_tunnel_depth
    }

    pub fn with_etch_bias(&self, etch_bias: f64) -> Result<Self> {
        Self::new(
            etch_bias,
            self.release_enlargement_rate,
            self.min_drawn_gap,
            self.max_tunnel_depth,
        )
    }

    pub fn with_min_drawn_gap(&self, min_drawn_gap: f64) -> Result<Self> {
        Self::new(
            self.etch_bias,
            self.release_enlargement_rate,
            min_drawn_gap,
            self.max_tunnel_depth,
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// The affine model without the rule checks.
    pub fn gap_after_release(&self, drawn_gap: f64, tunnel_depth: f64) -> f64 {
        drawn_gap + self.etch_bias + self.release_enlargement_rate * tunnel_depth
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcessInput {
    #[serde(default)]
    #[allow(dead_code)]
    schema_version: Option<u32>,
    etch_bias: Option<QuantityInput>,
    /// Dimensionless (m per m).
    release_enlargement_rate: Option<f64>,
    min_drawn_gap: Option<QuantityInput>,
    max_tunnel_depth: Option<QuantityInput>,
}

impl TryFrom<ProcessInput> for ProcessModel {
    type Error = Error;

    fn try_from(raw: ProcessInput) -> Result<Self> {
        let d = ProcessModel::default();
        let length = |q: Option<QuantityInput>, fallback: f64| match q {
            Some(q) => q.resolve(Unit::Meter),
            None => Ok(fallback),
        };
        ProcessModel::new(
            length(raw.etch_bias, d.etch_bias)?,
            raw.release_enlargement_rate
                .unwrap_or(d.release_enlargement_rate),
            length(raw.min_drawn_gap, d.min_drawn_gap)?,
            length(raw.max_tunnel_depth, d.max_tunnel_depth)?,
        )
    }
}

fn drawn_gap_rule(drawn_gap: f64, p: &ProcessModel) -> RuleCheck {
    RuleCheck {
        rule: "min_drawn_gap".into(),
        passed: drawn_gap >= p.min_drawn_gap,
        detail: format!(
            "drawn gap {:.1} nm, floor {:.1} nm",
            drawn_gap * 1e9,
            p.min_drawn_gap * 1e9
        ),
    }
}

fn tunnel_rule(tunnel_depth: f64, p: &ProcessModel) -> RuleCheck {
    RuleCheck {
        rule: "max_tunnel_depth".into(),
        passed: tunnel_depth <= p.max_tunnel_depth,
        detail: format!(
            "tunnel depth {:.3} um, ceiling {:.3} um",
            tunnel_depth * 1e6,
            p.max_tunnel_depth * 1e6
        ),
    }
}

/// Gap after etch and release.
pub fn released_gap(drawn_gap: f64, tunnel_depth: f64, p: &ProcessModel) -> Result<f64> {
    require_non_negative("tunnel_depth", tunnel_depth)?;
    for (rule, check) in [
        ("min_drawn_gap", drawn_gap_rule(drawn_gap, p)),
        ("max_tunnel_depth", tunnel_rule(tunnel_depth, p)),
    ] {
        if !check.passed {
            return Err(Error::FabConstraint {
                rule,
                reason: check.detail,
            });
        }
    }
    Ok(p.gap_after_release(drawn_gap, tunnel_depth))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleCheck {
    pub rule: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FabReport {
    pub drawn_gap: f64,
    pub tunnel_depth: f64,
    /// Affine-model gap, reported even when a rule fails.
    pub released_gap: f64,
    pub rules: Vec<RuleCheck>,
    pub passed: bool,
    pub calibration: String,
}

impl FabReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "drawn gap     {:.2} nm", self.drawn_gap * 1e9).unwrap();
        writeln!(out, "tunnel depth  {:.3} um", self.tunnel_depth * 1e6).unwrap();
        writeln!(out, "released gap  {:.2} nm", self.released_gap * 1e9).unwrap();
        for r in &self.rules {
            let mark = if r.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{mark}  {:<26} {}", r.rule, r.detail).unwrap();
        }
        writeln!(
            out,
            "overall       {}",
            if self.passed { "PASS" } else { "FAIL" }
        )
        .unwrap();
        writeln!(out, "note: {}", self.calibration).unwrap();
        out
    }

    pub fn failed_rules(&self) -> Vec<&str> {
        self.rules
            .iter()
            .filter(|r| !r.passed)
            .map(|r| r.rule.as_str())
            .collect()
    }
}

/// Rule report for a transducer whose `gap` is the drawn gap.
pub fn check_fab_constraints(t: &Transducer, tunnel_depth: f64, p: &ProcessModel) -> FabReport {
    let drawn = t.gap();
    let rules = vec![
        drawn_gap_rule(drawn, p),
        tunnel_rule(tunnel_depth, p),
        RuleCheck {
            rule: "tunnel_depth_non_negative".into(),
            passed: tunnel_depth >= 0.0,
            detail: format!("tunnel depth {:.3} um", tunnel_depth * 1e6),
        },
    ];
    FabReport {
        drawn_gap: drawn,
        tunnel_depth,
        released_gap: p.gap_after_release(drawn, tunnel_depth.max(0.0)),
        passed: rules.iter().all(|r| r.passed),
        rules,
        calibration: CALIBRATION_NOTE.into(),
    }
}

/// The transducer with its gap replaced by the released gap.
pub fn as_fabricated(t: &Transducer, tunnel_depth: f64, p: &ProcessModel) -> Result<Transducer> {
    t.with_gap(released_gap(t.gap(), tunnel_depth, p)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_json() {
        let p = ProcessModel::from_json("{}").unwrap();
        assert_eq!(p, ProcessModel::default());
        let p =
            ProcessModel::from_json(r#"{"etch_bias": "0nm", "max_tunnel_depth": "2um"}"#).unwrap();
        assert_eq!(p.etch_bias(), 0.0);
        assert!((p.max_tunnel_depth() - 2e-6).abs() < 1e-18);
        assert!(ProcessModel::from_json(r#"{"etch_bias": "-1nm"}"#).is_err());
        assert!(ProcessModel::from_json(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn zero_tunnel_adds_only_etch_bias() {
        let p = ProcessModel::default();
        assert_eq!(released_gap(100e-9, 0.0, &p).unwrap(), 100e-9 + 10e-9);
    }

    #[test]
    fn violations_are_named() {
        let p = ProcessModel::default();
        match released_gap(50e-9, 0.0, &p) {
            Err(Error::FabConstraint { rule, .. }) => assert_eq!(rule, "min_drawn_gap"),
            other => panic!("{other:?}"),
        }
        match released_gap(100e-9, 6e-6, &p) {
            Err(Error::FabConstraint { rule, .. }) => assert_eq!(rule, "max_tunnel_depth"),
            other => panic!("{other:?}"),
        }
        let t = Transducer::airgap(50e-9, 5.0, 1e-12).unwrap();
        let report = check_fab_constraints(&t, 1e-6, &p);
        assert!(!report.passed);
        assert_eq!(report.failed_rules(), vec!["min_drawn_gap"]);
        assert!(report.to_text().contains("FAIL  min_drawn_gap"));
        assert!(report.to_json().contains("single-point calibration"));
    }
}
