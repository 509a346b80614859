use serde::{Deserialize, Serialize};

use crate::constants::EPSILON_0;
use crate::error::{invariant, require_non_negative, require_positive, Error, Result};
use crate::units::{QuantityInput, Unit};

/// Small-signal parameters of a resonant-gate MOS readout.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MosInput")]
pub struct MosParams {
    bias_drain_current: f64,
    channel_modulation_order: f64,
}

impl MosParams {
    pub fn new(bias_drain_current: f64, channel_modulation_order: f64) -> Result<Self> {
        require_positive("bias_drain_current", bias_drain_current)?;
        require_positive("channel_modulation_order", channel_modulation_order)?;
        Ok(Self {
            bias_drain_current,
            channel_modulation_order,
        })
    }

    /// Drain current at the operating point, A.
    pub fn bias_drain_current(&self) -> f64 {
        self.bias_drain_current
    }

    /// Exponent m of the law I_D ∝ (gate capacitance per area)^m.
    pub fn channel_modulation_order(&self) -> f64 {
        self.channel_modulation_order
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MosInput {
    bias_drain_current: QuantityInput,
    #[serde(default = "default_order")]
    channel_modulation_order: f64,
}

fn default_order() -> f64 {
    1.0
}

impl TryFrom<MosInput> for MosParams {
    type Error = Error;

    fn try_from(raw: MosInput) -> Result<Self> {
        MosParams::new(
            raw.bias_drain_current.resolve(Unit::Ampere)?,
            raw.channel_modulation_order,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Detection {
    Capacitive,
    Mos(MosParams),
}

/// Parallel-plate electrode facing the resonator across a gap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TransducerInput")]
pub struct Transducer {
    gap: f64,
    bias_voltage: f64,
    drive_voltage: f64,
    electrode_area: f64,
    gap_rel_permittivity: f64,
    detection: Detection,
}

/// Default AC drive amplitude, V.
pub const DEFAULT_DRIVE_VOLTAGE: f64 = 0.1;

impl Transducer {
    pub fn new(
        gap: f64,
        bias_voltage: f64,
        drive_voltage: f64,
        electrode_area: f64,
        gap_rel_permittivity: f64,
        detection: Detection,
    ) -> Result<Self> {
        require_positive("gap", gap)?;
        require_non_negative("bias_voltage", bias_voltage)?;
        require_non_negative("drive_voltage", drive_voltage)?;
        require_positive("electrode_area", electrode_area)?;
        if !(gap_rel_permittivity.is_finite() && gap_rel_permittivity >= 1.0) {
            return Err(invariant(
                "gap_rel_permittivity",
                format!("must be >= 1, got {gap_rel_permittivity}"),
            ));
        }
        Ok(Self {
            gap,
            bias_voltage,
            drive_voltage,
            electrode_area,
            gap_rel_permittivity,
            detection,
        })
    }

    /// Air-gap capacitive transducer with the default drive level.
    pub fn airgap(gap: f64, bias_voltage: f64, electrode_area: f64) -> Result<Self> {
        Self::new(
            gap,
            bias_voltage,
            DEFAULT_DRIVE_VOLTAGE,
            electrode_area,
            1.0,
            Detection::Capacitive,
        )
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn bias_voltage(&self) -> f64 {
        self.bias_voltage
    }

    pub fn drive_voltage(&self) -> f64 {
        self.drive_voltage
    }

    pub fn electrode_area(&self) -> f64 {
        self.electrode_area
    }

    pub fn gap_rel_permittivity(&self) -> f64 {
        self.gap_rel_permittivity
    }

    pub fn detection(&self) -> Detection {
        self.detection
    }

    /// ε₀·ε_r·S, the numerator of every parallel-plate expression.
    pub fn permittivity_area(&self) -> f64 {
        EPSILON_0 * self.gap_rel_permittivity * self.electrode_area
    }

    /// Static electrode capacitance ε₀ε_rS/d₀.
    pub fn static_capacitance(&self) -> f64 {
        self.permittivity_area() / self.gap
    }

    pub fn with_gap(&self, gap: f64) -> Result<Self> {
        Self::new(
            gap,
            self.bias_voltage,
            self.drive_voltage,
            self.electrode_area,
            self.gap_rel_permittivity,
            self.detection,
        )
    }

    pub fn with_bias(&self, bias_voltage: f64) -> Result<Self> {
        Self::new(
            self.gap,
            bias_voltage,
            self.drive_voltage,
            self.electrode_area,
            self.gap_rel_permittivity,
            self.detection,
        )
    }

    pub fn with_drive(&self, drive_voltage: f64) -> Result<Self> {
        Self::new(
            self.gap,
            self.bias_voltage,
            drive_voltage,
            self.electrode_area,
            self.gap_rel_permittivity,
            self.detection,
        )
    }

    pub fn with_electrode_area(&self, electrode_area: f64) -> Result<Self> {
        Self::new(
            self.gap,
            self.bias_voltage,
            self.drive_voltage,
            electrode_area,
            self.gap_rel_permittivity,
            self.detection,
        )
    }

    pub fn with_gap_permittivity(&self, gap_rel_permittivity: f64) -> Result<Self> {
        Self::new(
            self.gap,
            self.bias_voltage,
            self.drive_voltage,
            self.electrode_area,
            gap_rel_permittivity,
            self.detection,
        )
    }

    pub fn with_detection(&self, detection: Detection) -> Self {
        Self { detection, ..*self }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TransducerInput {
    gap: QuantityInput,
    bias_voltage: QuantityInput,
    #[serde(default)]
    drive_voltage: Option<QuantityInput>,
    electrode_area: QuantityInput,
    #[serde(default = "default_gap_permittivity")]
    gap_rel_permittivity: f64,
    #[serde(default = "default_detection")]
    detection: Detection,
}

fn default_gap_permittivity() -> f64 {
    1.0
}

fn default_detection() -> Detection {
    Detection::Capacitive
}

impl TryFrom<TransducerInput> for Transducer {
    type Error = Error;

    fn try_from(raw: TransducerInput) -> Result<Self> {
        Transducer::new(
            raw.gap.resolve(Unit::Meter)?,
            raw.bias_voltage.resolve(Unit::Volt)?,
            match raw.drive_voltage {
                Some(v) => v.resolve(Unit::Volt)?,
                None => DEFAULT_DRIVE_VOLTAGE,
            },
            raw.electrode_area.resolve(Unit::SquareMeter)?,
            raw.gap_rel_permittivity,
            raw.detection,
        )
    }
}
