use serde::{Deserialize, Serialize};

use crate::analytic::fundamental_mode;
use crate::design::profile::Interval;
use crate::error::{invariant, require_non_negative, require_positive, Error, Result};
use crate::fab::{check_fab_constraints, FabReport, ProcessModel};
use crate::geometry::Geometry;
use crate::material::Material;
use crate::mode::ModeResult;
use crate::transducer::Transducer;
use crate::transduction::{
    electrostatic_spring, motional_resistance, pull_in_voltage, spring_softening_frequency,
};

const CONSISTENCY: f64 = 1e-9;

/// Everything a design is made of. The transducer gap is the drawn gap;
/// the analysis applies the process to obtain the released one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignInputs {
    pub geometry: Geometry,
    pub material: Material,
    pub transducer: Transducer,
    pub assumed_q: f64,
    #[serde(default)]
    pub tunnel_depth: f64,
    #[serde(default)]
    pub process: ProcessModel,
    /// Bias sweep for the tuning figure; defaults to [0, V_p].
    #[serde(default)]
    pub tuning_voltage_range: Option<Interval>,
}

impl DesignInputs {
    pub fn tuning_sweep(&self) -> Result<Interval> {
        match self.tuning_voltage_range {
            Some(r) => Ok(r),
            None => Interval::new(0.0, self.transducer.bias_voltage()),
        }
    }
}

/// As-fabricated figures of merit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Analysis {
    /// Unbiased mechanical resonance, Hz.
    pub mechanical_frequency: f64,
    /// Operating frequency at V_p, spring softening included, Hz.
    pub frequency: f64,
    pub effective_mass: f64,
    pub effective_stiffness: f64,
    pub released_gap: f64,
    pub motional_resistance: f64,
    pub pull_in_voltage: f64,
    /// V_p / V_PI.
    pub pull_in_fraction: f64,
    /// f(v_min) − f(v_max) over the tuning sweep, Hz.
    pub tuning_range: f64,
    pub fab: FabReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CandidateRecord")]
pub struct DesignCandidate {
    pub inputs: DesignInputs,
    pub analysis: Analysis,
}

#[derive(Deserialize)]
struct CandidateRecord {
    inputs: DesignInputs,
    analysis: Analysis,
}

impl TryFrom<CandidateRecord> for DesignCandidate {
    type Error = Error;

    fn try_from(raw: CandidateRecord) -> Result<Self> {
        let c = DesignCandidate {
            inputs: raw.inputs,
            analysis: raw.analysis,
        };
        c.verify()?;
        Ok(c)
    }
}

impl DesignCandidate {
    /// Analyzes with the analytic working mode of the geometry.
    pub fn analyze(inputs: DesignInputs) -> Result<Self> {
        let mode = fundamental_mode(&inputs.geometry, &inputs.material)?;
        Self::analyze_with_mode(inputs, &mode)
    }

    /// Analyzes with a mode supplied by the caller (e.g. from FEM or a
    /// scaled reference).
    pub fn analyze_with_mode(inputs: DesignInputs, mode: &ModeResult) -> Result<Self> {
        require_positive("assumed_q", inputs.assumed_q)?;
        require_non_negative("tunnel_depth", inputs.tunnel_depth)?;
        let fab = check_fab_constraints(&inputs.transducer, inputs.tunnel_depth, &inputs.process);
        let released = inputs.transducer.with_gap(fab.released_gap)?;
        let sweep = inputs.tuning_sweep()?;
        let v_pi = pull_in_voltage(mode, &released);
        let analysis = Analysis {
            mechanical_frequency: mode.frequency(),
            frequency: spring_softening_frequency(mode, &released)?,
            effective_mass: mode.effective_mass(),
            effective_stiffness: mode.effective_stiffness(),
            released_gap: fab.released_gap,
            motional_resistance: motional_resistance(mode, &released, inputs.assumed_q)?,
            pull_in_voltage: v_pi,
            pull_in_fraction: released.bias_voltage() / v_pi,
            tuning_range: sweep_tuning(mode, &released, sweep.lo(), sweep.hi())?,
            fab,
        };
        Ok(Self { inputs, analysis })
    }

    /// Released-gap transducer used by the analysis.
    pub fn as_fabricated_transducer(&self) -> Result<Transducer> {
        self.inputs.transducer.with_gap(self.analysis.released_gap)
    }

    pub fn mode(&self) -> Result<ModeResult> {
        ModeResult::new(
            self.analysis.mechanical_frequency,
            0,
            self.analysis.effective_mass,
            vec![1.0],
        )
    }

    /// Recomputes the analysis from the inputs and compares every number.
    pub fn verify(&self) -> Result<()> {
        let fresh = Self::analyze(self.inputs.clone())?;
        let (a, b) = (&self.analysis, &fresh.analysis);
        let pairs = [
            (
                "mechanical_frequency",
                a.mechanical_frequency,
                b.mechanical_frequency,
            ),
            ("frequency", a.frequency, b.frequency),
            ("effective_mass", a.effective_mass, b.effective_mass),
            (
                "effective_stiffness",
                a.effective_stiffness,
                b.effective_stiffness,
            ),
            ("released_gap", a.released_gap, b.released_gap),
            (
                "motional_resistance",
                a.motional_resistance,
                b.motional_resistance,
            ),
            ("pull_in_voltage", a.pull_in_voltage, b.pull_in_voltage),
            ("pull_in_fraction", a.pull_in_fraction, b.pull_in_fraction),
            ("tuning_range", a.tuning_range, b.tuning_range),
        ];
        for (field, stored, recomputed) in pairs {
            let scale = stored.abs().max(recomputed.abs());
            if (stored - recomputed).abs() > CONSISTENCY * scale {
                return Err(invariant(
                    "analysis",
                    format!("{field} = {stored:e} does not match recomputed {recomputed:e}"),
                ));
            }
        }
        if a.fab.passed != b.fab.passed {
            return Err(invariant(
                "analysis",
                "fab verdict does not match recomputation",
            ));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

fn sweep_tuning(mode: &ModeResult, t: &Transducer, v_min: f64, v_max: f64) -> Result<f64> {
    if !(v_min >= 0.0 && v_min <= v_max && v_max.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "tuning sweep needs 0 <= v_min <= v_max, got [{v_min}, {v_max}]"
        )));
    }
    let v_pi = pull_in_voltage(mode, t);
    if v_max >= v_pi {
        let at = t.with_bias(v_pi)?;
        return Err(Error::Unstable {
            voltage: v_pi,
            ratio: electrostatic_spring(&at) / mode.effective_stiffness(),
        });
    }
    let f = |v: f64| -> Result<f64> { spring_softening_frequency(mode, &t.with_bias(v)?) };
    Ok(f(v_min)? - f(v_max)?)
}

/// Frequency excursion f(v_min) − f(v_max) of the as-fabricated design.
/// Sweeping up to or past pull-in is an error carrying the pull-in voltage.
pub fn tuning_range(c: &DesignCandidate, v_min: f64, v_max: f64) -> Result<f64> {
    sweep_tuning(&c.mode()?, &c.as_fabricated_transducer()?, v_min, v_max)
}
