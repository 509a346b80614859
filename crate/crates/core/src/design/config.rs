//! Versioned JSON configs for designs and optimizer design spaces.
//!
//! Lengths, voltages and frequencies accept either SI numbers or
//! unit-suffixed strings (see [`crate::units`]). Materials are a preset
//! name, a path to a material file, or an inline object.

use serde::{Deserialize, Serialize};

use crate::design::candidate::DesignInputs;
use crate::design::check::Tolerances;
use crate::design::optimize::{Bounds, DesignSpace, Family, OptimizerSettings};
use crate::design::profile::Interval;
use crate::error::{Error, Result};
use crate::fab::ProcessModel;
use crate::geometry::{Geometry, VibrationAxis};
use crate::material::{load_material, Material};
use crate::transducer::{Detection, Transducer, DEFAULT_DRIVE_VOLTAGE};
use crate::units::{parse_quantity, QuantityInput, Unit};

pub const SCHEMA_VERSION: u32 = 1;

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "unsupported schema_version {v}, expected {SCHEMA_VERSION}"
        )))
    }
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaterialRef {
    Name(String),
    Inline(Material),
}

impl MaterialRef {
    pub fn resolve(&self) -> Result<Material> {
        match self {
            MaterialRef::Name(n) => load_material(n),
            MaterialRef::Inline(m) => Ok(*m),
        }
    }
}

fn default_material() -> MaterialRef {
    MaterialRef::Name("silicon".into())
}

fn resolve_opt(q: &Option<QuantityInput>, unit: Unit, fallback: f64) -> Result<f64> {
    match q {
        Some(q) => q.resolve(unit),
        None => Ok(fallback),
    }
}

fn interval(raw: &[QuantityInput; 2], unit: Unit) -> Result<Interval> {
    Interval::new(raw[0].resolve(unit)?, raw[1].resolve(unit)?)
}

/// One resonator design plus the knobs the front ends need.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignConfig {
    pub schema_version: u32,
    #[serde(default = "default_material")]
    pub material: MaterialRef,
    pub geometry: Geometry,
    pub transducer: Transducer,
    pub q: f64,
    #[serde(default)]
    tunnel_depth: Option<QuantityInput>,
    #[serde(default)]
    pub process: Option<ProcessModel>,
    #[serde(default)]
    tuning_voltage_range: Option<[QuantityInput; 2]>,
    #[serde(default)]
    termination: Option<QuantityInput>,
    #[serde(default)]
    pub scales: Option<Vec<f64>>,
    #[serde(default)]
    pub spectrum_points: Option<usize>,
    #[serde(default)]
    pub beam_elements: Option<usize>,
    #[serde(default)]
    pub disk_divisions: Option<usize>,
}

impl DesignConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = parse(text)?;
        check_version(c.schema_version)?;
        Ok(c)
    }

    pub fn inputs(&self) -> Result<DesignInputs> {
        Ok(DesignInputs {
            geometry: self.geometry,
            material: self.material.resolve()?,
            transducer: self.transducer,
            assumed_q: self.q,
            tunnel_depth: resolve_opt(&self.tunnel_depth, Unit::Meter, 0.0)?,
            process: self.process.unwrap_or_default(),
            tuning_voltage_range: match &self.tuning_voltage_range {
                Some(r) => Some(interval(r, Unit::Volt)?),
                None => None,
            },
        })
    }

    /// Two-port termination, Ω (50 Ω unless set).
    pub fn termination(&self) -> Result<f64> {
        resolve_opt(
            &self.termination,
            Unit::Ohm,
            crate::transduction::DEFAULT_TERMINATION,
        )
    }
}

/// Geometry and mesh settings for modal runs. Unknown keys are ignored so
/// a full design config can be passed as well.
#[derive(Debug, Clone, Deserialize)]
pub struct ModalConfig {
    pub schema_version: u32,
    #[serde(default = "default_material")]
    pub material: MaterialRef,
    pub geometry: Geometry,
    #[serde(default)]
    pub beam_elements: Option<usize>,
    #[serde(default)]
    pub disk_divisions: Option<usize>,
}

impl ModalConfig {
    pub const DEFAULT_BEAM_ELEMENTS: usize = 64;

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = parse(text)?;
        check_version(c.schema_version)?;
        Ok(c)
    }

    pub fn beam_elements(&self) -> usize {
        self.beam_elements.unwrap_or(Self::DEFAULT_BEAM_ELEMENTS)
    }

    pub fn disk_divisions(&self) -> usize {
        self.disk_divisions
            .unwrap_or(crate::fem::modal::DISK_MESH_DIVISIONS)
    }
}

/// Design space for the optimizer.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    pub schema_version: u32,
    pub family: Family,
    #[serde(default)]
    vibration_axis: Option<VibrationAxis>,
    #[serde(default = "default_material")]
    material: MaterialRef,
    #[serde(default)]
    length: Option<[QuantityInput; 2]>,
    #[serde(default)]
    radius: Option<[QuantityInput; 2]>,
    #[serde(default)]
    width: Option<[QuantityInput; 2]>,
    thickness: [QuantityInput; 2],
    drawn_gap: [QuantityInput; 2],
    bias_voltage: [QuantityInput; 2],
    #[serde(default)]
    assumed_q: Option<f64>,
    #[serde(default)]
    tunnel_depth: Option<QuantityInput>,
    #[serde(default)]
    drive_voltage: Option<QuantityInput>,
    #[serde(default)]
    electrode_fraction: Option<f64>,
    #[serde(default)]
    gap_rel_permittivity: Option<f64>,
    #[serde(default)]
    detection: Option<Detection>,
    #[serde(default)]
    pub process: Option<ProcessModel>,
    #[serde(default)]
    pub tolerances: Option<Tolerances>,
    #[serde(default)]
    pub settings: Option<OptimizerSettings>,
}

impl SpaceConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Self = parse(text)?;
        check_version(c.schema_version)?;
        Ok(c)
    }

    pub fn space(&self) -> Result<DesignSpace> {
        let size = match (self.family, &self.length, &self.radius) {
            (Family::Beam, Some(l), None) => interval(l, Unit::Meter)?,
            (Family::Disk, None, Some(r)) => interval(r, Unit::Meter)?,
            _ => {
                return Err(Error::Schema(
                    "beam spaces need `length`, disk spaces need `radius` (not both)".into(),
                ))
            }
        };
        let width = match &self.width {
            Some(w) => Some(interval(w, Unit::Meter)?),
            None => None,
        };
        Ok(DesignSpace {
            bounds: Bounds {
                family: self.family,
                vibration_axis: self.vibration_axis.unwrap_or(VibrationAxis::InPlane),
                size,
                width,
                thickness: interval(&self.thickness, Unit::Meter)?,
                drawn_gap: interval(&self.drawn_gap, Unit::Meter)?,
                bias_voltage: interval(&self.bias_voltage, Unit::Volt)?,
            },
            material: self.material.resolve()?,
            assumed_q: self.assumed_q,
            tunnel_depth: resolve_opt(&self.tunnel_depth, Unit::Meter, 0.0)?,
            drive_voltage: resolve_opt(&self.drive_voltage, Unit::Volt, DEFAULT_DRIVE_VOLTAGE)?,
            electrode_fraction: self.electrode_fraction,
            gap_rel_permittivity: self.gap_rel_permittivity.unwrap_or(1.0),
            detection: self.detection.unwrap_or(Detection::Capacitive),
        })
    }
}

/// Parses a bare quantity such as `"90nm"` or `"1.19um"`.
pub fn quantity(text: &str, unit: Unit) -> Result<f64> {
    parse_quantity(text, unit)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DESIGN: &str = r#"{
        "schema_version": 1,
        "geometry": {"family": "beam", "length": "10um", "width": "0.46um",
                     "thickness": "0.4um", "vibration_axis": "in_plane"},
        "transducer": {"gap": "90nm", "bias_voltage": "5V", "electrode_area": "4um2"},
        "q": 10000,
        "tunnel_depth": "1.19um",
        "tuning_voltage_range": ["1.2V", "5V"]
    }"#;

    #[test]
    fn design_config() {
        let c = DesignConfig::from_json(DESIGN).unwrap();
        let i = c.inputs().unwrap();
        assert!((i.tunnel_depth - 1.19e-6).abs() < 1e-18);
        assert_eq!(i.tuning_voltage_range.unwrap().lo(), 1.2);
        assert_eq!(c.termination().unwrap(), 50.0);
        let bad = DESIGN.replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(matches!(
            DesignConfig::from_json(&bad),
            Err(Error::Schema(_))
        ));
        let unknown = DESIGN.replace("\"q\": 10000", "\"q\": 10000, \"extra\": 1");
        assert!(DesignConfig::from_json(&unknown).is_err());
        let modal = ModalConfig::from_json(DESIGN).unwrap();
        assert_eq!(modal.beam_elements(), 64);
    }

    #[test]
    fn space_config() {
        let c = SpaceConfig::from_json(
            r#"{"schema_version": 1, "family": "disk", "radius": ["20um", "30um"],
                "thickness": ["1um", "3um"], "drawn_gap": ["80nm", "120nm"],
                "bias_voltage": ["1.2V", "5V"], "settings": {"grid_points": 3}}"#,
        )
        .unwrap();
        let s = c.space().unwrap();
        assert_eq!(s.bounds.family, Family::Disk);
        assert!((s.bounds.size.hi() - 30e-6).abs() < 1e-18);
        assert_eq!(c.settings.unwrap().grid_points, 3);
        assert_eq!(
            c.settings.unwrap().max_results,
            OptimizerSettings::default().max_results
        );
        let mixed = SpaceConfig::from_json(
            r#"{"schema_version": 1, "family": "disk", "length": ["20um", "30um"],
                "thickness": ["1um", "3um"], "drawn_gap": ["80nm", "120nm"],
                "bias_voltage": ["1.2V", "5V"]}"#,
        )
        .unwrap();
        assert!(mixed.space().is_err());
    }
}
