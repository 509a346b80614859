//! Capacitive versus resonant-gate MOS readout.
//!
//! Under a uniform length scale s at fixed voltages and Q, the parallel-plate
//! factor ε₀ε_rS/d₀² is scale-free, k_r ∝ s and ω₀ ∝ 1/s, so the amplitude
//! goes as 1/s and the capacitive current as s⁻². The MOS current
//! I_D·m·x/d₀ also goes as s⁻² at a fixed drain current; what separates
//! the two is the drain current itself, which follows the gate capacitance
//! per area (∝ 1/d₀ ∝ 1/s) to the power m. The ratio therefore scales as
//! s⁻ᵐ.

use serde::{Deserialize, Serialize};

use crate::analytic::fundamental_mode;
use crate::error::{invariant, Error, Result};
use crate::geometry::Geometry;
use crate::material::Material;
use crate::mode::ModeResult;
use crate::transducer::{Detection, MosParams, Transducer};
use crate::transduction::electrostatics::{resonant_amplitude, transduction_factor};

/// i_cap = ω₀·V_p·(ε₀ε_rS/d₀²)·x.
pub fn capacitive_output_current(mode: &ModeResult, t: &Transducer, q: f64) -> Result<f64> {
    Ok(mode.angular_frequency() * transduction_factor(t) * resonant_amplitude(mode, t, q)?)
}

/// i_mos = I_D·m·(x/d₀), first-order modulation of the gate capacitance.
pub fn mos_output_current(mode: &ModeResult, t: &Transducer, q: f64) -> Result<f64> {
    let Detection::Mos(mos) = t.detection() else {
        return Err(Error::DetectionMismatch("mos"));
    };
    let x = resonant_amplitude(mode, t, q)?;
    Ok(mos.bias_drain_current() * mos.channel_modulation_order() * x / t.gap())
}

/// Slope of log(i_mos/i_cap) against log(s) for modulation order m.
pub fn detection_ratio_exponent(channel_modulation_order: f64) -> f64 {
    -channel_modulation_order
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionPoint {
    pub scale: f64,
    pub mos_current: f64,
    pub capacitive_current: f64,
    pub ratio: f64,
}

/// Ratio curve over uniformly shrunk copies of the base design. Lengths
/// scale by s, electrode area by s², the drain current by s⁻ᵐ; voltages
/// and Q stay fixed.
pub fn detection_comparison(
    geometry: &Geometry,
    mat: &Material,
    t: &Transducer,
    q: f64,
    scales: &[f64],
) -> Result<Vec<DetectionPoint>> {
    let Detection::Mos(mos) = t.detection() else {
        return Err(Error::DetectionMismatch("mos"));
    };
    validate_scales(scales)?;
    scales
        .iter()
        .map(|&s| {
            let m = mos.channel_modulation_order();
            let scaled_mos = MosParams::new(mos.bias_drain_current() * s.powf(-m), m)?;
            let ts = t
                .with_gap(t.gap() * s)?
                .with_electrode_area(t.electrode_area() * s * s)?
                .with_detection(Detection::Mos(scaled_mos));
            let mode = fundamental_mode(&geometry.scaled(s)?, mat)?;
            let mos_current = mos_output_current(&mode, &ts, q)?;
            let capacitive_current = capacitive_output_current(&mode, &ts, q)?;
            Ok(DetectionPoint {
                scale: s,
                mos_current,
                capacitive_current,
                ratio: mos_current / capacitive_current,
            })
        })
        .collect()
}

fn validate_scales(scales: &[f64]) -> Result<()> {
    if scales.first() != Some(&1.0) {
        return Err(invariant("scales", "must start at 1"));
    }
    if !scales.windows(2).all(|w| w[1] < w[0]) {
        return Err(invariant("scales", "must be strictly descending"));
    }
    if !scales.iter().all(|&s| s > 0.0) {
        return Err(invariant("scales", "must lie in (0, 1]"));
    }
    Ok(())
}

/// Detection table as CSV: `scale,mos_current_a,capacitive_current_a,ratio`.
pub fn detection_csv(points: &[DetectionPoint]) -> String {
    let mut out = String::from("scale,mos_current_a,capacitive_current_a,ratio\n");
    for p in points {
        out.push_str(&format!(
            "{},{:.12e},{:.12e},{:.12e}\n",
            p.scale, p.mos_current, p.capacitive_current, p.ratio
        ));
    }
    out
}
