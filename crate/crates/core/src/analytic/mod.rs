//! Closed-form modal models and their lumped-parameter reductions.

pub mod beam;
pub mod bessel;
pub mod disk;

pub use beam::{
    beam_effective_params, beam_mode, beam_mode_frequency, clamped_clamped_lambda,
    default_drive_point, BeamModeCoefficient,
};
pub use disk::{disk_effective_params, disk_mode, disk_wineglass_frequency, disk_wineglass_omega};

use crate::error::Result;
use crate::geometry::Geometry;
use crate::material::Material;
use crate::mode::ModeResult;

/// Working mode of either family: the fundamental flexural mode of a beam
/// driven at mid-span, or the n = 2 wine-glass mode of a disk.
pub fn fundamental_mode(geometry: &Geometry, mat: &Material) -> Result<ModeResult> {
    match geometry {
        Geometry::Beam(b) => beam_mode(b, mat, 1, 0.5),
        Geometry::Disk(d) => disk_mode(d, mat, 2),
    }
}
