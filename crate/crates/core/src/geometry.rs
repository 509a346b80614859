use serde::{Deserialize, Serialize};

use crate::error::{invariant, require_positive, Error, Result};
use crate::units::{QuantityInput, Unit};

/// Direction of flexural motion relative to the wafer plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VibrationAxis {
    /// Motion along the thickness; bending stiffness set by `thickness`.
    OutOfPlane,
    /// Motion along the width; bending stiffness set by `width`.
    InPlane,
}

/// Prismatic clamped-clamped beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BeamInput")]
pub struct BeamGeometry {
    length: f64,
    width: f64,
    thickness: f64,
    vibration_axis: VibrationAxis,
}

impl BeamGeometry {
    pub fn new(
        length: f64,
        width: f64,
        thickness: f64,
        vibration_axis: VibrationAxis,
    ) -> Result<Self> {
        require_positive("length", length)?;
        require_positive("width", width)?;
        require_positive("thickness", thickness)?;
        if length <= width.max(thickness) {
            return Err(invariant(
                "length",
                format!("must exceed width and thickness, got {length}"),
            ));
        }
        Ok(Self {
            length,
            width,
            thickness,
            vibration_axis,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn vibration_axis(&self) -> VibrationAxis {
        self.vibration_axis
    }

    pub fn area(&self) -> f64 {
        self.width * self.thickness
    }

    /// Cross-section dimension along the direction of motion.
    pub fn bending_depth(&self) -> f64 {
        match self.vibration_axis {
            VibrationAxis::OutOfPlane => self.thickness,
            VibrationAxis::InPlane => self.width,
        }
    }

    /// Cross-section dimension perpendicular to the motion.
    pub fn bending_breadth(&self) -> f64 {
        match self.vibration_axis {
            VibrationAxis::OutOfPlane => self.width,
            VibrationAxis::InPlane => self.thickness,
        }
    }

    /// Second moment of area about the neutral axis of the selected motion.
    pub fn second_moment(&self) -> f64 {
        self.bending_breadth() * self.bending_depth().powi(3) / 12.0
    }

    /// Area of the face that looks at a sense/drive electrode (length × breadth).
    pub fn facing_area(&self) -> f64 {
        self.length * self.bending_breadth()
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(
            self.length * s,
            self.width * s,
            self.thickness * s,
            self.vibration_axis,
        )
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BeamInput {
    length: QuantityInput,
    width: QuantityInput,
    thickness: QuantityInput,
    vibration_axis: VibrationAxis,
}

impl TryFrom<BeamInput> for BeamGeometry {
    type Error = Error;

    fn try_from(raw: BeamInput) -> Result<Self> {
        BeamGeometry::new(
            raw.length.resolve(Unit::Meter)?,
            raw.width.resolve(Unit::Meter)?,
            raw.thickness.resolve(Unit::Meter)?,
            raw.vibration_axis,
        )
    }
}

/// Thin circular disk, free at the rim.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DiskInput")]
pub struct DiskGeometry {
    radius: f64,
    thickness: f64,
}

impl DiskGeometry {
    pub fn new(radius: f64, thickness: f64) -> Result<Self> {
        require_positive("radius", radius)?;
        require_positive("thickness", thickness)?;
        if thickness >= radius {
            return Err(invariant(
                "thickness",
                format!("thin-disk model needs thickness < radius, got {thickness} >= {radius}"),
            ));
        }
        Ok(Self { radius, thickness })
    }

    pub fn from_diameter(diameter: f64, thickness: f64) -> Result<Self> {
        Self::new(diameter / 2.0, thickness)
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn mass(&self, density: f64) -> f64 {
        density * std::f64::consts::PI * self.radius.powi(2) * self.thickness
    }

    /// Full cylindrical rim area 2πR·t.
    pub fn rim_area(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.radius * self.thickness
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.radius * s, self.thickness * s)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DiskInput {
    #[serde(default)]
    radius: Option<QuantityInput>,
    #[serde(default)]
    diameter: Option<QuantityInput>,
    thickness: QuantityInput,
}

impl TryFrom<DiskInput> for DiskGeometry {
    type Error = Error;

    fn try_from(raw: DiskInput) -> Result<Self> {
        let radius = match (raw.radius, raw.diameter) {
            (Some(r), None) => r.resolve(Unit::Meter)?,
            (None, Some(d)) => d.resolve(Unit::Meter)? / 2.0,
            _ => {
                return Err(Error::Schema(
                    "disk needs exactly one of `radius` or `diameter`".into(),
                ))
            }
        };
        DiskGeometry::new(radius, raw.thickness.resolve(Unit::Meter)?)
    }
}

/// Either resonator family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Geometry {
    Beam(BeamGeometry),
    Disk(DiskGeometry),
}

impl Geometry {
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Ok(match self {
            Geometry::Beam(b) => Geometry::Beam(b.scaled(s)?),
            Geometry::Disk(d) => Geometry::Disk(d.scaled(s)?),
        })
    }
}
