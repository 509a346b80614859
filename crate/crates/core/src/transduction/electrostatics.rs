//! Parallel-plate transduction of one mode: motional resistance, drive
//! amplitude, bias tuning and pull-in.

use crate::error::{require_positive, Error, Result};
use crate::mode::ModeResult;
use crate::transducer::Transducer;

/// η = V_p·ε₀ε_rS/d₀², the force per volt (and current per velocity).
pub fn transduction_factor(t: &Transducer) -> f64 {
    t.bias_voltage() * t.permittivity_area() / t.gap().powi(2)
}

/// R_x = (k_r/(ω₀·V_p²))·(d₀⁴/(ε₀²ε_r²S²))·(1/Q).
pub fn motional_resistance(mode: &ModeResult, t: &Transducer, q: f64) -> Result<f64> {
    require_positive("q", q)?;
    if t.bias_voltage() == 0.0 {
        return Err(Error::ZeroBias);
    }
    let eps_s = t.permittivity_area();
    Ok(
        mode.effective_stiffness() / (mode.angular_frequency() * t.bias_voltage().powi(2))
            * (t.gap().powi(4) / (eps_s * eps_s))
            / q,
    )
}

/// Peak displacement at resonance, x = Q·F/k_r with F = V_p·v_ac·ε₀ε_rS/d₀².
pub fn resonant_amplitude(mode: &ModeResult, t: &Transducer, q: f64) -> Result<f64> {
    require_positive("q", q)?;
    let force = transduction_factor(t) * t.drive_voltage();
    Ok(q * force / mode.effective_stiffness())
}

/// Electrostatic spring k_e = V_p²·ε₀ε_rS/d₀³ (softening, subtracted from k_r).
pub fn electrostatic_spring(t: &Transducer) -> f64 {
    t.bias_voltage().powi(2) * t.permittivity_area() / t.gap().powi(3)
}

/// Bias-tuned frequency f₀·sqrt(1 − k_e/k_r).
pub fn spring_softening_frequency(mode: &ModeResult, t: &Transducer) -> Result<f64> {
    let ratio = electrostatic_spring(t) / mode.effective_stiffness();
    if ratio >= 1.0 {
        return Err(Error::Unstable {
            voltage: t.bias_voltage(),
            ratio,
        });
    }
    Ok(mode.frequency() * (1.0 - ratio).sqrt())
}

/// Bias at which k_e reaches k_r (the small-signal stability limit).
pub fn instability_voltage(mode: &ModeResult, t: &Transducer) -> f64 {
    (mode.effective_stiffness() * t.gap().powi(3) / t.permittivity_area()).sqrt()
}

/// Parallel-plate pull-in, V_PI = sqrt(8·k_r·d₀³/(27·ε₀ε_rS)).
pub fn pull_in_voltage(mode: &ModeResult, t: &Transducer) -> f64 {
    (8.0 * mode.effective_stiffness() * t.gap().powi(3) / (27.0 * t.permittivity_area())).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode() -> ModeResult {
        ModeResult::new(40e6, 1, 1.7e-15, vec![1.0]).unwrap()
    }

    #[test]
    fn zero_bias_is_an_error() {
        let t = Transducer::airgap(90e-9, 0.0, 4e-12).unwrap();
        assert_eq!(motional_resistance(&mode(), &t, 1e4), Err(Error::ZeroBias));
        assert_eq!(
            spring_softening_frequency(&mode(), &t).unwrap(),
            mode().frequency()
        );
    }

    #[test]
    fn pull_in_precedes_instability() {
        let t = Transducer::airgap(90e-9, 5.0, 4e-12).unwrap();
        let ratio = pull_in_voltage(&mode(), &t) / instability_voltage(&mode(), &t);
        assert!((ratio - (8.0f64 / 27.0).sqrt()).abs() < 1e-14);
        let over = t
            .with_bias(1.01 * instability_voltage(&mode(), &t))
            .unwrap();
        assert!(matches!(
            spring_softening_frequency(&mode(), &over),
            Err(Error::Unstable { .. })
        ));
    }

    #[test]
    fn zero_drive_gives_zero_amplitude() {
        let t = Transducer::airgap(90e-9, 5.0, 4e-12)
            .unwrap()
            .with_drive(0.0)
            .unwrap();
        assert_eq!(resonant_amplitude(&mode(), &t, 1e4).unwrap(), 0.0);
    }
}
