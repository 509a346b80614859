//! Structural material constants.
//!
//! Built-in presets live in `data/materials.json` so the numbers are
//! configuration rather than code. The silicon preset uses E = 169 GPa
//! (the <110> in-plane value usually quoted for (100) wafers),
//! ρ = 2330 kg/m³, ν = 0.28 and ε_r = 11.7.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, require_positive, Error, Result};
use crate::units::{QuantityInput, Unit};

const PRESETS_JSON: &str = include_str!("../data/materials.json");

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MaterialInput")]
pub struct Material {
    youngs_modulus: f64,
    density: f64,
    poisson_ratio: f64,
    rel_permittivity: f64,
}

impl Material {
    pub fn new(
        youngs_modulus: f64,
        density: f64,
        poisson_ratio: f64,
        rel_permittivity: f64,
    ) -> Result<Self> {
        require_positive("youngs_modulus", youngs_modulus)?;
        require_positive("density", density)?;
        if !(poisson_ratio.is_finite() && (0.0..0.5).contains(&poisson_ratio)) {
            return Err(invariant(
                "poisson_ratio",
                format!("must lie in [0, 0.5), got {poisson_ratio}"),
            ));
        }
        if !(rel_permittivity.is_finite() && rel_permittivity >= 1.0) {
            return Err(invariant(
                "rel_permittivity",
                format!("must be >= 1, got {rel_permittivity}"),
            ));
        }
        Ok(Self {
            youngs_modulus,
            density,
            poisson_ratio,
            rel_permittivity,
        })
    }

    /// Young's modulus in Pa.
    pub fn youngs_modulus(&self) -> f64 {
        self.youngs_modulus
    }

    /// Mass density in kg/m³.
    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.poisson_ratio
    }

    pub fn rel_permittivity(&self) -> f64 {
        self.rel_permittivity
    }

    /// Copy with a different Young's modulus.
    pub fn with_youngs_modulus(&self, youngs_modulus: f64) -> Result<Self> {
        Self::new(
            youngs_modulus,
            self.density,
            self.poisson_ratio,
            self.rel_permittivity,
        )
    }

    pub fn with_density(&self, density: f64) -> Result<Self> {
        Self::new(
            self.youngs_modulus,
            density,
            self.poisson_ratio,
            self.rel_permittivity,
        )
    }

    /// Longitudinal plane-stress wave speed sqrt(E / (ρ(1-ν²))).
    pub fn plane_stress_longitudinal_speed(&self) -> f64 {
        (self.youngs_modulus / (self.density * (1.0 - self.poisson_ratio.powi(2)))).sqrt()
    }

    /// Shear wave speed sqrt(E / (2ρ(1+ν))).
    pub fn shear_speed(&self) -> f64 {
        (self.youngs_modulus / (2.0 * self.density * (1.0 + self.poisson_ratio))).sqrt()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("material serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MaterialInput {
    #[serde(default)]
    #[allow(dead_code)]
    schema_version: Option<u32>,
    #[serde(default)]
    #[allow(dead_code)]
    name: Option<String>,
    youngs_modulus: QuantityInput,
    density: QuantityInput,
    poisson_ratio: f64,
    #[serde(default = "default_permittivity")]
    rel_permittivity: f64,
}

fn default_permittivity() -> f64 {
    1.0
}

impl TryFrom<MaterialInput> for Material {
    type Error = Error;

    fn try_from(raw: MaterialInput) -> Result<Self> {
        Material::new(
            raw.youngs_modulus.resolve(Unit::Pascal)?,
            raw.density.resolve(Unit::KilogramPerCubicMeter)?,
            raw.poisson_ratio,
            raw.rel_permittivity,
        )
    }
}

/// Built-in material presets keyed by name.
pub fn presets() -> BTreeMap<String, Material> {
    serde_json::from_str(PRESETS_JSON).expect("bundled presets are valid")
}

/// Resolves a preset name, or failing that, reads a JSON material file.
pub fn load_material(name_or_file: &str) -> Result<Material> {
    if let Some(m) = presets().get(name_or_file) {
        return Ok(*m);
    }
    let path = Path::new(name_or_file);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Schema(e.to_string()))?;
        return Material::from_json(&text);
    }
    Err(Error::UnknownPreset(name_or_file.to_string()))
}

/// Silicon preset; used as the default everywhere.
pub fn silicon() -> Material {
    presets()["silicon"]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silicon_preset_values() {
        let si = load_material("silicon").unwrap();
        assert_eq!(si.youngs_modulus(), 169e9);
        assert_eq!(si.density(), 2330.0);
        assert_eq!(si.poisson_ratio(), 0.28);
        assert_eq!(si.rel_permittivity(), 11.7);
    }

    #[test]
    fn negative_density_is_rejected() {
        let text = r#"{"youngs_modulus": 169e9, "density": -1, "poisson_ratio": 0.28}"#;
        match Material::from_json(text) {
            Err(Error::Schema(msg)) => assert!(msg.contains("density"), "{msg}"),
            other => panic!("expected invariant failure, got {other:?}"),
        }
    }

    #[test]
    fn unknown_preset() {
        assert_eq!(
            load_material("unobtainium"),
            Err(Error::UnknownPreset("unobtainium".into()))
        );
    }

    #[test]
    fn suffixed_fields_parse() {
        let text = r#"{"youngs_modulus": "150GPa", "density": 2300, "poisson_ratio": 0.226}"#;
        let m = Material::from_json(text).unwrap();
        assert_eq!(m.youngs_modulus(), 150e9);
        assert_eq!(m.rel_permittivity(), 1.0);
    }

    #[test]
    fn poisson_bounds() {
        assert!(Material::new(1e9, 1.0, 0.5, 1.0).is_err());
        assert!(Material::new(1e9, 1.0, -0.1, 1.0).is_err());
        assert!(Material::new(1e9, 1.0, 0.0, 0.5).is_err());
    }
}
