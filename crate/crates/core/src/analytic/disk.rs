//! In-plane vibration of a free circular disk under plane stress.
//!
//! Displacements derive from a dilatational potential φ = A·J_n(hr)·cos nθ
//! and an equivoluminal one ψ = B·J_n(kr)·sin nθ, with h = ω/c_L and
//! k = ω/c_T. Setting σ_rr = σ_rθ = 0 at r = R gives a 2×2 homogeneous
//! system in (A, B); with x = hR and y = kR its entries (up to a common
//! factor μ/R² and column signs) are
//!
//! ```text
//! | (n² + n − y²/2)·J_n(x) − x·J_{n−1}(x)    n·((n+1)·J_n(y) − y·J_{n−1}(y)) |
//! | n·((n+1)·J_n(x) − x·J_{n−1}(x))          (n² + n − y²/2)·J_n(y) − y·J_{n−1}(y) |
//! ```
//!
//! The determinant has no poles, so every sign change in a frequency scan
//! brackets a genuine root.

use std::f64::consts::PI;

use crate::analytic::bessel::{bessel_j, bessel_j_prime};
use crate::error::{Error, Result};
use crate::geometry::DiskGeometry;
use crate::material::Material;
use crate::mode::ModeResult;
use crate::roots::bisect;

/// Radial stations in the sampled disk mode shape.
pub const SHAPE_SAMPLES: usize = 101;
const SCAN_POINTS: usize = 4000;
const QUADRATURE_INTERVALS: usize = 2000;

fn check_order(n: usize) -> Result<u32> {
    if (2..=64).contains(&n) {
        Ok(n as u32)
    } else {
        Err(Error::InvalidModeOrder(n))
    }
}

/// Boundary-traction matrix at angular frequency `omega` (rad/s).
pub fn characteristic_matrix(
    geom: &DiskGeometry,
    mat: &Material,
    n: usize,
    omega: f64,
) -> Result<[[f64; 2]; 2]> {
    let order = check_order(n)?;
    let nf = n as f64;
    let x = omega * geom.radius() / mat.plane_stress_longitudinal_speed();
    let y = omega * geom.radius() / mat.shear_speed();
    let (jx, jx1) = (bessel_j(order, x), bessel_j(order - 1, x));
    let (jy, jy1) = (bessel_j(order, y), bessel_j(order - 1, y));
    let diag = nf * nf + nf - 0.5 * y * y;
    Ok([
        [diag * jx - x * jx1, nf * ((nf + 1.0) * jy - y * jy1)],
        [nf * ((nf + 1.0) * jx - x * jx1), diag * jy - y * jy1],
    ])
}

pub fn characteristic_determinant(
    geom: &DiskGeometry,
    mat: &Material,
    n: usize,
    omega: f64,
) -> Result<f64> {
    let m = characteristic_matrix(geom, mat, n, omega)?;
    Ok(m[0][0] * m[1][1] - m[0][1] * m[1][0])
}

/// Rayleigh-quotient estimate from the trial field u = ∇(rⁿ cos nθ):
/// ω² = 4n(n−1)·μ/(ρR²), i.e. ω = 2·c_T·sqrt(n(n−1))/R. An upper bound.
pub fn rayleigh_guess(geom: &DiskGeometry, mat: &Material, n: usize) -> f64 {
    let nf = n as f64;
    2.0 * mat.shear_speed() * (nf * (nf - 1.0)).sqrt() / geom.radius()
}

/// Search window (rad/s) scanned for the lowest root.
pub fn search_window(geom: &DiskGeometry, mat: &Material, n: usize) -> (f64, f64) {
    let guess = rayleigh_guess(geom, mat, n);
    (0.1 * guess, 10.0 * guess)
}

/// Lowest root of the characteristic equation as angular frequency, rad/s.
pub fn disk_wineglass_omega(geom: &DiskGeometry, mat: &Material, n: usize) -> Result<f64> {
    check_order(n)?;
    let (lo, hi) = search_window(geom, mat, n);
    let ratio = (hi / lo).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let det = |w: f64| characteristic_determinant(geom, mat, n, w).expect("order checked");
    let mut w_prev = lo;
    let mut d_prev = det(lo);
    for i in 1..SCAN_POINTS {
        let w = lo * ratio.powi(i as i32);
        let d = det(w);
        if d == 0.0 {
            return Ok(w);
        }
        if d.signum() != d_prev.signum() {
            return bisect(det, w_prev, w, 1e-14).ok_or(Error::NoRoot { lo, hi });
        }
        w_prev = w;
        d_prev = d;
    }
    Err(Error::NoRoot { lo, hi })
}

/// Wine-glass (n = 2) or higher-order in-plane frequency, Hz.
pub fn disk_wineglass_frequency(geom: &DiskGeometry, mat: &Material, n: usize) -> Result<f64> {
    Ok(disk_wineglass_omega(geom, mat, n)? / (2.0 * PI))
}

/// Radial and tangential amplitude profiles U_r(r), U_θ(r) of a mode;
/// u_r = U_r(r)·cos nθ, u_θ = U_θ(r)·sin nθ.
#[derive(Debug, Clone, Copy)]
pub struct DiskModeProfile {
    order: u32,
    h: f64,
    k: f64,
    a: f64,
    b: f64,
}

impl DiskModeProfile {
    pub fn new(geom: &DiskGeometry, mat: &Material, n: usize, omega: f64) -> Result<Self> {
        let order = check_order(n)?;
        let m = characteristic_matrix(geom, mat, n, omega)?;
        // Physical row r is [m_r0, -m_r1]·(A, B) = 0; take the better-conditioned row.
        let row0 = m[0][0].hypot(m[0][1]);
        let row1 = m[1][0].hypot(m[1][1]);
        let (a, b) = if row0 >= row1 {
            (m[0][1], m[0][0])
        } else {
            (m[1][1], m[1][0])
        };
        Ok(Self {
            order,
            h: omega / mat.plane_stress_longitudinal_speed(),
            k: omega / mat.shear_speed(),
            a,
            b,
        })
    }

    pub fn radial(&self, r: f64) -> f64 {
        let n = self.order;
        let bend = if r > 0.0 {
            n as f64 / r * bessel_j(n, self.k * r)
        } else {
            0.0
        };
        self.a * self.h * bessel_j_prime(n, self.h * r) + self.b * bend
    }

    pub fn tangential(&self, r: f64) -> f64 {
        let n = self.order;
        let spin = if r > 0.0 {
            n as f64 / r * bessel_j(n, self.h * r)
        } else {
            0.0
        };
        -self.a * spin - self.b * self.k * bessel_j_prime(n, self.k * r)
    }
}

/// Lumped mass and stiffness referred to the peak rim radial displacement.
///
/// m_eff = ρ·t·π·∫₀^R (U_r² + U_θ²)·r dr / U_r(R)², integrated by composite
/// Simpson; the π comes from ∫cos² nθ dθ = ∫sin² nθ dθ = π.
pub fn disk_effective_params(geom: &DiskGeometry, mat: &Material, n: usize) -> Result<(f64, f64)> {
    let omega = disk_wineglass_omega(geom, mat, n)?;
    let profile = DiskModeProfile::new(geom, mat, n, omega)?;
    let radius = geom.radius();
    let h = radius / QUADRATURE_INTERVALS as f64;
    let integrand = |r: f64| (profile.radial(r).powi(2) + profile.tangential(r).powi(2)) * r;
    let mut sum = integrand(0.0) + integrand(radius);
    for i in 1..QUADRATURE_INTERVALS {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * integrand(i as f64 * h);
    }
    let integral = sum * h / 3.0;
    let rim = profile.radial(radius);
    let effective_mass = mat.density() * geom.thickness() * PI * integral / (rim * rim);
    Ok((effective_mass, omega * omega * effective_mass))
}

/// Modal summary; the shape samples U_r along the θ = 0 ray from centre to rim.
pub fn disk_mode(geom: &DiskGeometry, mat: &Material, n: usize) -> Result<ModeResult> {
    let omega = disk_wineglass_omega(geom, mat, n)?;
    let profile = DiskModeProfile::new(geom, mat, n, omega)?;
    let (effective_mass, _) = disk_effective_params(geom, mat, n)?;
    let shape = (0..SHAPE_SAMPLES)
        .map(|i| profile.radial(geom.radius() * i as f64 / (SHAPE_SAMPLES - 1) as f64))
        .collect();
    ModeResult::new(omega / (2.0 * PI), n, effective_mass, shape)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::silicon;

    fn fig4() -> DiskGeometry {
        DiskGeometry::from_diameter(6e-6, 0.4e-6).unwrap()
    }

    /// Classical closed form of the same frequency equation:
    /// [Ψ_n(ζ/ξ) − n − q][Ψ_n(ζ) − n − q] = (nq − n)², Ψ_n(x) = x·J_{n−1}(x)/J_n(x),
    /// ζ = ωR/c_T, ξ = c_L/c_T, q = ζ²/(2n² − 2).
    fn onoe_residual(geom: &DiskGeometry, mat: &Material, n: u32, omega: f64) -> f64 {
        let nf = n as f64;
        let zeta = omega * geom.radius() / mat.shear_speed();
        let xi = mat.plane_stress_longitudinal_speed() / mat.shear_speed();
        let q = zeta * zeta / (2.0 * nf * nf - 2.0);
        let psi = |x: f64| x * bessel_j(n - 1, x) / bessel_j(n, x);
        (psi(zeta / xi) - nf - q) * (psi(zeta) - nf - q) - (nf * q - nf).powi(2)
    }

    #[test]
    fn fig4_frequency_band() {
        let f = disk_wineglass_frequency(&fig4(), &silicon(), 2).unwrap();
        assert!((f - 644e6).abs() / 644e6 < 0.10, "{f}");
    }

    #[test]
    fn root_agrees_with_onoe_form() {
        let g = fig4();
        let si = silicon();
        let w = disk_wineglass_omega(&g, &si, 2).unwrap();
        let lo = bisect(|x| onoe_residual(&g, &si, 2, x), 0.99 * w, 1.01 * w, 1e-14).unwrap();
        assert!((lo / w - 1.0).abs() < 1e-10, "{lo} vs {w}");
        // frozen from the same equation solved with scipy.special.jv + brentq
        assert!((w / (2.0 * PI) / 662.2337781170058e6 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn residual_is_small_relative_to_bracket() {
        let g = fig4();
        let si = silicon();
        let w = disk_wineglass_omega(&g, &si, 2).unwrap();
        let (lo, hi) = search_window(&g, &si, 2);
        let max = (0..=1000)
            .map(|i| lo + (hi - lo) * i as f64 / 1000.0)
            .map(|x| characteristic_determinant(&g, &si, 2, x).unwrap().abs())
            .fold(0.0, f64::max);
        let at_root = characteristic_determinant(&g, &si, 2, w).unwrap().abs();
        assert!(at_root < 1e-9 * max);
    }

    #[test]
    fn scale_and_thickness_laws() {
        let si = silicon();
        let f = disk_wineglass_frequency(&fig4(), &si, 2).unwrap();
        let big = DiskGeometry::new(3e-6 * 2.5, 0.4e-6 * 2.5).unwrap();
        let f_big = disk_wineglass_frequency(&big, &si, 2).unwrap();
        assert!((f / f_big - 2.5).abs() < 1e-9);
        let thick = DiskGeometry::new(3e-6, 0.8e-6).unwrap();
        assert_eq!(disk_wineglass_frequency(&thick, &si, 2).unwrap(), f);
    }

    #[test]
    fn rayleigh_guess_bounds_root() {
        let g = fig4();
        let si = silicon();
        assert!(rayleigh_guess(&g, &si, 2) > disk_wineglass_omega(&g, &si, 2).unwrap());
        assert!(disk_wineglass_omega(&g, &si, 1).is_err());
    }

    #[test]
    fn profile_is_traction_free() {
        // σ_rr and σ_rθ at the rim from finite differences of the profiles.
        let g = fig4();
        let si = silicon();
        let w = disk_wineglass_omega(&g, &si, 2).unwrap();
        let p = DiskModeProfile::new(&g, &si, 2, w).unwrap();
        let (e, nu) = (si.youngs_modulus(), si.poisson_ratio());
        let lam = e * nu / (1.0 - nu * nu);
        let mu = e / (2.0 * (1.0 + nu));
        let r = g.radius();
        let dr = r * 1e-5;
        let dur = (p.radial(r + dr) - p.radial(r - dr)) / (2.0 * dr);
        let dut = (p.tangential(r + dr) - p.tangential(r - dr)) / (2.0 * dr);
        let (ur, ut) = (p.radial(r), p.tangential(r));
        let n = 2.0;
        let srr = (lam + 2.0 * mu) * dur + lam * (ur + n * ut) / r;
        let srt = mu * (-n * ur / r + dut - ut / r);
        let scale = (lam + 2.0 * mu) * ur.abs() / r;
        assert!(srr.abs() < 1e-6 * scale, "{srr} vs {scale}");
        assert!(srt.abs() < 1e-6 * scale, "{srt} vs {scale}");
    }

    #[test]
    fn effective_mass_below_total() {
        let g = fig4();
        let si = silicon();
        let (m, k) = disk_effective_params(&g, &si, 2).unwrap();
        assert!(m > 0.0 && m < g.mass(si.density()));
        let w = disk_wineglass_omega(&g, &si, 2).unwrap();
        assert!((k / (w * w * m) - 1.0).abs() < 1e-14);
    }
}
