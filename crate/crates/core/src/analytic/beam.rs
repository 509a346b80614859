//! Clamped-clamped Euler–Bernoulli beam.
//!
//! The flexural frequency is written as f = A_n·sqrt(E/ρ)·t/L², with t the
//! cross-section depth along the motion and A_n = λ_n²/(2π√12). The
//! commonly printed form t/L drops one power of L; t/L² is the
//! dimensionally consistent reading and the one used here.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::geometry::BeamGeometry;
use crate::material::Material;
use crate::mode::ModeResult;
use crate::roots::bisect;

/// Number of axial stations in a sampled beam mode shape.
pub const SHAPE_SAMPLES: usize = 101;

/// Eigenvalue λ_n of cos λ·cosh λ = 1 and the matching frequency coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamModeCoefficient {
    pub mode_order: usize,
    pub lambda: f64,
    pub a_n: f64,
}

impl BeamModeCoefficient {
    pub fn new(mode_order: usize) -> Result<Self> {
        let lambda = clamped_clamped_lambda(mode_order)?;
        Ok(Self {
            mode_order,
            lambda,
            a_n: lambda * lambda / (2.0 * PI * 12f64.sqrt()),
        })
    }
}

/// n-th positive root of cos λ·cosh λ = 1, found as a root of cos λ − 1/cosh λ.
pub fn clamped_clamped_lambda(n: usize) -> Result<f64> {
    if n == 0 || n > 200 {
        return Err(Error::InvalidModeOrder(n));
    }
    let centre = (n as f64 + 0.5) * PI;
    bisect(
        |l| l.cos() - 1.0 / l.cosh(),
        centre - PI / 4.0,
        centre + PI / 4.0,
        1e-15,
    )
    .ok_or(Error::InvalidModeOrder(n))
}

/// Unnormalized clamped-clamped shape φ(ξ) = cosh − cos − σ(sinh − sin) at λξ.
///
/// Rearranged so the growing exponentials cancel analytically; the
/// naive form loses all precision beyond the fourth mode. With this σ,
/// ∫₀¹ φ² dξ = 1.
pub fn mode_shape_value(lambda: f64, xi: f64) -> f64 {
    let x = lambda * xi;
    let denom = lambda.sinh() - lambda.sin();
    let sigma = (lambda.cosh() - lambda.cos()) / denom;
    let one_minus_sigma = (-(-lambda).exp() - lambda.sin() + lambda.cos()) / denom;
    0.5 * x.exp() * one_minus_sigma + 0.5 * (-x).exp() * (1.0 + sigma) - x.cos() + sigma * x.sin()
}

/// Flexural resonant frequency in Hz.
pub fn beam_mode_frequency(geom: &BeamGeometry, mat: &Material, n: usize) -> Result<f64> {
    let coeff = BeamModeCoefficient::new(n)?;
    Ok(
        coeff.a_n * (mat.youngs_modulus() / mat.density()).sqrt() * geom.bending_depth()
            / geom.length().powi(2),
    )
}

/// Lumped mass and stiffness referred to the displacement at `drive_point`.
pub fn beam_effective_params(
    geom: &BeamGeometry,
    mat: &Material,
    n: usize,
    drive_point: f64,
) -> Result<(f64, f64)> {
    if !(drive_point > 0.0 && drive_point < 1.0) {
        return Err(invariant(
            "drive_point",
            format!("must lie strictly inside (0, 1), got {drive_point}"),
        ));
    }
    let lambda = clamped_clamped_lambda(n)?;
    let at_drive = mode_shape_value(lambda, drive_point);
    let peak = (0..SHAPE_SAMPLES)
        .map(|i| mode_shape_value(lambda, i as f64 / (SHAPE_SAMPLES - 1) as f64).abs())
        .fold(0.0, f64::max);
    if at_drive.abs() < 1e-9 * peak {
        return Err(Error::SingularDrivePoint {
            mode: n,
            drive_point,
        });
    }
    let total_mass = mat.density() * geom.area() * geom.length();
    let effective_mass = total_mass / (at_drive * at_drive);
    let omega = 2.0 * PI * beam_mode_frequency(geom, mat, n)?;
    Ok((effective_mass, omega * omega * effective_mass))
}

/// Full modal summary: frequency, lumped parameters and sampled shape.
pub fn beam_mode(
    geom: &BeamGeometry,
    mat: &Material,
    n: usize,
    drive_point: f64,
) -> Result<ModeResult> {
    let (effective_mass, _) = beam_effective_params(geom, mat, n, drive_point)?;
    let lambda = clamped_clamped_lambda(n)?;
    let shape = (0..SHAPE_SAMPLES)
        .map(|i| mode_shape_value(lambda, i as f64 / (SHAPE_SAMPLES - 1) as f64))
        .collect();
    ModeResult::new(beam_mode_frequency(geom, mat, n)?, n, effective_mass, shape)
}

/// Drive point used when none is given: the antinode closest to mid-span.
pub fn default_drive_point(n: usize) -> Result<f64> {
    let lambda = clamped_clamped_lambda(n)?;
    let stations = 20_000;
    let mut best = (0.0_f64, 0.5_f64);
    for i in 1..stations {
        let xi = i as f64 / stations as f64;
        let v = mode_shape_value(lambda, xi).abs();
        // prefer the station nearer the centre when amplitudes tie
        if v > best.0 * (1.0 + 1e-12)
            || ((v - best.0).abs() <= 1e-12 * best.0 && (xi - 0.5).abs() < (best.1 - 0.5).abs())
        {
            best = (v, xi);
        }
    }
    Ok(best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::VibrationAxis;
    use crate::material::silicon;

    fn fig3(axis: VibrationAxis) -> BeamGeometry {
        BeamGeometry::new(10e-6, 0.46e-6, 0.4e-6, axis).unwrap()
    }

    /// Composite Simpson on [0, 1]; independent of the identity ∫φ² = 1.
    fn simpson(f: impl Fn(f64) -> f64, intervals: usize) -> f64 {
        let h = 1.0 / intervals as f64;
        let mut s = f(0.0) + f(1.0);
        for i in 1..intervals {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(i as f64 * h);
        }
        s * h / 3.0
    }

    /// Textbook form of the shape, fine for low modes.
    fn naive_shape(lambda: f64, xi: f64) -> f64 {
        let sigma = (lambda.cosh() - lambda.cos()) / (lambda.sinh() - lambda.sin());
        let x = lambda * xi;
        x.cosh() - x.cos() - sigma * (x.sinh() - x.sin())
    }

    #[test]
    fn eigenvalues_match_table() {
        for (n, want) in [(1, 4.730041), (2, 7.853205), (3, 10.995608)] {
            let l = clamped_clamped_lambda(n).unwrap();
            assert!((l - want).abs() < 1e-6, "λ_{n} = {l}");
            assert!((l.cos() * l.cosh() - 1.0).abs() < 1e-9);
        }
        assert!(clamped_clamped_lambda(0).is_err());
    }

    #[test]
    fn stable_shape_matches_naive_for_low_modes() {
        for n in 1..4 {
            let l = clamped_clamped_lambda(n).unwrap();
            for i in 0..=20 {
                let xi = i as f64 / 20.0;
                assert!((mode_shape_value(l, xi) - naive_shape(l, xi)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn fig3_in_plane_frequency() {
        let f = beam_mode_frequency(&fig3(VibrationAxis::InPlane), &silicon(), 1).unwrap();
        assert!((f - 38.8e6).abs() / 38.8e6 < 0.10, "{f}");
    }

    #[test]
    fn length_doubling_quarters_frequency() {
        let g = fig3(VibrationAxis::InPlane);
        let g2 = BeamGeometry::new(20e-6, 0.46e-6, 0.4e-6, VibrationAxis::InPlane).unwrap();
        let f1 = beam_mode_frequency(&g, &silicon(), 1).unwrap();
        let f2 = beam_mode_frequency(&g2, &silicon(), 1).unwrap();
        assert!((f1 / f2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn out_of_plane_ignores_width() {
        let a = BeamGeometry::new(10e-6, 0.46e-6, 0.4e-6, VibrationAxis::OutOfPlane).unwrap();
        let b = BeamGeometry::new(10e-6, 0.92e-6, 0.4e-6, VibrationAxis::OutOfPlane).unwrap();
        assert_eq!(
            beam_mode_frequency(&a, &silicon(), 1).unwrap(),
            beam_mode_frequency(&b, &silicon(), 1).unwrap()
        );
    }

    #[test]
    fn harmonic_ratio() {
        let g = fig3(VibrationAxis::InPlane);
        let f1 = beam_mode_frequency(&g, &silicon(), 1).unwrap();
        let f2 = beam_mode_frequency(&g, &silicon(), 2).unwrap();
        let l1 = clamped_clamped_lambda(1).unwrap();
        let l2 = clamped_clamped_lambda(2).unwrap();
        assert!((f2 / f1 - (l2 / l1).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn midspan_effective_mass_fraction() {
        // Oracle: Simpson quadrature of φ² over [0,1], divided by φ(0.5)².
        let l = clamped_clamped_lambda(1).unwrap();
        let integral = simpson(|x| naive_shape(l, x).powi(2), 2000);
        let oracle = integral / naive_shape(l, 0.5).powi(2);
        assert!((oracle - 0.396).abs() < 5e-4, "{oracle}");

        let g = fig3(VibrationAxis::InPlane);
        let si = silicon();
        let (m, k) = beam_effective_params(&g, &si, 1, 0.5).unwrap();
        let total = si.density() * g.area() * g.length();
        assert!((m / total - oracle).abs() < 1e-9);
        let w = 2.0 * PI * beam_mode_frequency(&g, &si, 1).unwrap();
        assert!((k / (w * w * m) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn unit_mean_square_shape() {
        for n in 1..6 {
            let l = clamped_clamped_lambda(n).unwrap();
            assert!((simpson(|x| mode_shape_value(l, x).powi(2), 4000) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn node_drive_point_is_singular() {
        let g = fig3(VibrationAxis::InPlane);
        assert_eq!(
            beam_effective_params(&g, &silicon(), 2, 0.5),
            Err(Error::SingularDrivePoint {
                mode: 2,
                drive_point: 0.5
            })
        );
        assert!(beam_effective_params(&g, &silicon(), 1, 1.0).is_err());
    }

    #[test]
    fn default_drive_points_are_antinodes() {
        assert_eq!(default_drive_point(1).unwrap(), 0.5);
        let d2 = default_drive_point(2).unwrap();
        assert!(d2 > 0.2 && d2 < 0.4 || d2 > 0.6 && d2 < 0.8, "{d2}");
        for n in 2..5 {
            let d = default_drive_point(n).unwrap();
            let l = clamped_clamped_lambda(n).unwrap();
            let peak = (1..1000)
                .map(|i| mode_shape_value(l, i as f64 / 1000.0).abs())
                .fold(0.0, f64::max);
            assert!(mode_shape_value(l, d).abs() >= peak * (1.0 - 1e-6));
        }
    }

    #[test]
    fn mode_result_is_normalized() {
        let m = beam_mode(&fig3(VibrationAxis::InPlane), &silicon(), 1, 0.5).unwrap();
        let peak = m.mode_shape().iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        assert_eq!(peak, 1.0);
        assert_eq!(m.mode_shape().len(), SHAPE_SAMPLES);
    }
}
