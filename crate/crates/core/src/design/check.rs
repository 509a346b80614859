use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::design::candidate::DesignCandidate;
use crate::design::profile::{FrequencyTarget, SpecProfile};
use crate::error::{Error, Result};

/// Default relative frequency tolerance for single-frequency targets.
pub const DEFAULT_FREQUENCY_TOLERANCE: f64 = 0.005;

/// Matching tolerances. A missing field means exact matching, so `{}`
/// parses to exact semantics; `Tolerances::standard()` is the ±0.5% default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    #[serde(default)]
    pub frequency_relative: f64,
}

impl Tolerances {
    pub fn standard() -> Self {
        Self {
            frequency_relative: DEFAULT_FREQUENCY_TOLERANCE,
        }
    }

    pub fn exact() -> Self {
        Self {
            frequency_relative: 0.0,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let t: Self = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        if !(t.frequency_relative >= 0.0 && t.frequency_relative.is_finite()) {
            return Err(Error::Schema(
                "frequency_relative must be a non-negative number".into(),
            ));
        }
        Ok(t)
    }
}

/// Values the checker compares against a profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub frequency: f64,
    pub q: f64,
    pub motional_resistance: f64,
    pub bias_voltage: f64,
    pub tuning_range: f64,
}

impl Metrics {
    pub fn of(c: &DesignCandidate) -> Self {
        Self {
            frequency: c.analysis.frequency,
            q: c.inputs.assumed_q,
            motional_resistance: c.analysis.motional_resistance,
            bias_voltage: c.inputs.transducer.bias_voltage(),
            tuning_range: c.analysis.tuning_range,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub criterion: String,
    pub status: Status,
    pub value: f64,
    pub requirement: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecReport {
    pub profile: String,
    pub criteria: Vec<CriterionResult>,
    /// AND over the applicable criteria.
    pub passed: bool,
}

impl SpecReport {
    pub fn criterion(&self, name: &str) -> Option<&CriterionResult> {
        self.criteria.iter().find(|c| c.criterion == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.criteria
            .iter()
            .filter(|c| c.status == Status::Fail)
            .map(|c| c.criterion.as_str())
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "profile {}", self.profile).unwrap();
        for c in &self.criteria {
            let mark = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "n/a ",
            };
            writeln!(
                out,
                "{mark}  {:<10} {:>14.6e}  {}",
                c.criterion, c.value, c.requirement
            )
            .unwrap();
        }
        writeln!(out, "overall {}", if self.passed { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

fn entry(criterion: &str, value: f64, requirement: Option<(bool, String)>) -> CriterionResult {
    let (status, requirement) = match requirement {
        Some((true, r)) => (Status::Pass, r),
        Some((false, r)) => (Status::Fail, r),
        None => (Status::NotApplicable, "not specified".into()),
    };
    CriterionResult {
        criterion: criterion.into(),
        status,
        value,
        requirement,
    }
}

/// Per-criterion verdicts for raw metrics.
pub fn check_metrics(m: &Metrics, p: &SpecProfile, tol: &Tolerances) -> SpecReport {
    let frequency = match &p.center_frequency {
        FrequencyTarget::Center(fc) => {
            let ok = (m.frequency - fc).abs() <= tol.frequency_relative * fc;
            (
                ok,
                format!("{fc:e} Hz ± {}%", tol.frequency_relative * 100.0),
            )
        }
        FrequencyTarget::Bands(bands) => {
            let ok = bands.iter().any(|b| b.contains(m.frequency));
            let list: Vec<String> = bands
                .iter()
                .map(|b| format!("[{:e}, {:e}]", b.lo(), b.hi()))
                .collect();
            (ok, format!("inside {} Hz", list.join(" or ")))
        }
    };
    let criteria = vec![
        entry("frequency", m.frequency, Some(frequency)),
        entry(
            "q",
            m.q,
            p.q_required.map(|q| (m.q >= q, format!(">= {q}"))),
        ),
        entry(
            "impedance",
            m.motional_resistance,
            p.impedance_range.map(|r| {
                (
                    r.contains(m.motional_resistance),
                    format!("[{}, {}] ohm", r.lo(), r.hi()),
                )
            }),
        ),
        entry(
            "dc_voltage",
            m.bias_voltage,
            p.dc_voltage_range.map(|r| {
                (
                    r.contains(m.bias_voltage),
                    format!("[{}, {}] V", r.lo(), r.hi()),
                )
            }),
        ),
        entry(
            "tuning",
            m.tuning_range,
            p.tuning_required
                .map(|t| (m.tuning_range >= t, format!(">= {t:e} Hz"))),
        ),
    ];
    SpecReport {
        profile: p.name.clone(),
        passed: criteria.iter().all(|c| c.status != Status::Fail),
        criteria,
    }
}

pub fn check_spec(c: &DesignCandidate, p: &SpecProfile, tol: &Tolerances) -> SpecReport {
    check_metrics(&Metrics::of(c), p, tol)
}
