use serde::{Deserialize, Serialize};

use crate::constants::TWO_PI;
use crate::error::{invariant, require_positive, Error, Result};

/// One resonant mode reduced to an equivalent single-dof oscillator.
///
/// `mode_shape` holds displacement samples scaled so the largest magnitude
/// is exactly 1. What the samples are depends on the producer: axial
/// stations along a beam, radial stations along the θ = 0 ray of a disk, or
/// the translational dofs of an FEM mode vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ModeInput")]
pub struct ModeResult {
    frequency: f64,
    mode_order: usize,
    effective_mass: f64,
    effective_stiffness: f64,
    mode_shape: Vec<f64>,
}

impl ModeResult {
    /// Builds a mode; stiffness follows from k = ω²·m and the shape is
    /// rescaled to unit maximum.
    pub fn new(
        frequency: f64,
        mode_order: usize,
        effective_mass: f64,
        mode_shape: Vec<f64>,
    ) -> Result<Self> {
        require_positive("frequency", frequency)?;
        require_positive("effective_mass", effective_mass)?;
        let peak = mode_shape.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if !(peak.is_finite() && peak > 0.0) {
            return Err(invariant("mode_shape", "needs a finite nonzero sample"));
        }
        let mode_shape = mode_shape.into_iter().map(|v| v / peak).collect();
        let omega = TWO_PI * frequency;
        Ok(Self {
            frequency,
            mode_order,
            effective_mass,
            effective_stiffness: omega * omega * effective_mass,
            mode_shape,
        })
    }

    /// Resonant frequency, Hz.
    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    pub fn angular_frequency(&self) -> f64 {
        TWO_PI * self.frequency
    }

    pub fn mode_order(&self) -> usize {
        self.mode_order
    }

    pub fn effective_mass(&self) -> f64 {
        self.effective_mass
    }

    pub fn effective_stiffness(&self) -> f64 {
        self.effective_stiffness
    }

    pub fn mode_shape(&self) -> &[f64] {
        &self.mode_shape
    }
}

#[derive(Debug, Deserialize)]
struct ModeInput {
    frequency: f64,
    mode_order: usize,
    effective_mass: f64,
    effective_stiffness: f64,
    mode_shape: Vec<f64>,
}

impl TryFrom<ModeInput> for ModeResult {
    type Error = Error;

    fn try_from(raw: ModeInput) -> Result<Self> {
        let mode = ModeResult::new(
            raw.frequency,
            raw.mode_order,
            raw.effective_mass,
            raw.mode_shape,
        )?;
        let rel =
            (mode.effective_stiffness - raw.effective_stiffness).abs() / mode.effective_stiffness;
        if rel > 1e-9 {
            return Err(invariant(
                "effective_stiffness",
                format!("inconsistent with (2πf)²·m_eff (relative error {rel:.2e})"),
            ));
        }
        Ok(ModeResult {
            effective_stiffness: raw.effective_stiffness,
            ..mode
        })
    }
}
