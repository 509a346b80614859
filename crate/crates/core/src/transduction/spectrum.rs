use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::TWO_PI;
use crate::error::{require_positive, Error, Result};
use crate::transduction::circuit::EquivalentCircuit;

/// Two-port termination used when none is given, Ω.
pub const DEFAULT_TERMINATION: f64 = 50.0;

/// Sampled transmission |H(f)| and arg H(f).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpectrumInput")]
pub struct Spectrum {
    frequencies: Vec<f64>,
    magnitude: Vec<f64>,
    phase: Vec<f64>,
}

#[derive(Deserialize)]
struct SpectrumInput {
    frequencies: Vec<f64>,
    magnitude: Vec<f64>,
    phase: Vec<f64>,
}

impl TryFrom<SpectrumInput> for Spectrum {
    type Error = Error;

    fn try_from(raw: SpectrumInput) -> Result<Self> {
        Spectrum::new(raw.frequencies, raw.magnitude, raw.phase)
    }
}

impl Spectrum {
    pub fn new(frequencies: Vec<f64>, magnitude: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if frequencies.len() != magnitude.len() || frequencies.len() != phase.len() {
            return Err(crate::error::invariant(
                "spectrum",
                "columns differ in length",
            ));
        }
        if !frequencies.windows(2).all(|w| w[1] > w[0]) {
            return Err(crate::error::invariant(
                "frequencies",
                "must be strictly increasing",
            ));
        }
        Ok(Self {
            frequencies,
            magnitude,
            phase,
        })
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn magnitude(&self) -> &[f64] {
        &self.magnitude
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    pub fn len(&self) -> usize {
        self.frequencies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frequencies.is_empty()
    }

    /// Index of the largest |H|.
    pub fn peak_index(&self) -> usize {
        self.magnitude.iter().enumerate().fold(
            0,
            |best, (i, &m)| if m > self.magnitude[best] { i } else { best },
        )
    }

    /// `frequency_hz,magnitude_db,phase_rad`, one row per sample.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("frequency_hz,magnitude_db,phase_rad\n");
        for i in 0..self.len() {
            writeln!(
                out,
                "{:.12e},{:.12e},{:.12e}",
                self.frequencies[i],
                20.0 * self.magnitude[i].log10(),
                self.phase[i]
            )
            .unwrap();
        }
        out
    }
}

/// Voltage transmission of the motional branch between two equal
/// terminations, with C₀ shunting each port. Without the shunts this is
/// H = 2·Z_term/(2·Z_term + Z_motional).
pub fn transmission(c: &EquivalentCircuit, termination: f64, f: f64) -> Complex64 {
    let w = TWO_PI * f;
    let j = Complex64::i();
    let zm = c.r_x() + j * w * c.l_x() + 1.0 / (j * w * c.c_x());
    let y = j * w * c.c0();
    // ABCD of shunt · series · shunt
    let a = 1.0 + zm * y;
    let cc = y * (2.0 + zm * y);
    2.0 / (a + zm / termination + cc * termination + a)
}

/// |H| and phase on `points` geometrically spaced frequencies in [f_lo, f_hi].
pub fn transmission_spectrum(
    c: &EquivalentCircuit,
    termination: f64,
    f_lo: f64,
    f_hi: f64,
    points: usize,
) -> Result<Spectrum> {
    require_positive("termination", termination)?;
    if !(f_lo > 0.0 && f_lo < c.f0() && c.f0() < f_hi && f_hi.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "need 0 < f_lo < f0 < f_hi, got {f_lo:e} < {:e} < {f_hi:e}",
            c.f0()
        )));
    }
    if points < 3 {
        return Err(Error::InvalidRange(format!(
            "need at least 3 points, got {points}"
        )));
    }
    let ratio = (f_hi / f_lo).ln();
    let frequencies: Vec<f64> = (0..points)
        .map(|i| {
            if i == points - 1 {
                f_hi
            } else {
                f_lo * (ratio * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect();
    let h: Vec<Complex64> = frequencies
        .iter()
        .map(|&f| transmission(c, termination, f))
        .collect();
    Spectrum::new(
        frequencies,
        h.iter().map(|v| v.norm()).collect(),
        h.iter().map(|v| v.arg()).collect(),
    )
}

/// Q = f_peak/Δf₋₃dB, crossings located by linear interpolation of |H| in dB.
pub fn extract_q(s: &Spectrum) -> Result<f64> {
    if s.len() < 3 {
        return Err(Error::QExtraction(
            "spectrum has fewer than 3 samples".into(),
        ));
    }
    let peak = s.peak_index();
    if peak == 0 || peak == s.len() - 1 {
        return Err(Error::QExtraction("peak lies on the grid boundary".into()));
    }
    let db: Vec<f64> = s.magnitude.iter().map(|m| 20.0 * m.log10()).collect();
    let level = db[peak] - 10.0 * 2f64.log10();
    let crossing = |i: usize, k: usize| {
        let (fa, fb) = (s.frequencies[i], s.frequencies[k]);
        fa + (level - db[i]) / (db[k] - db[i]) * (fb - fa)
    };
    let lower = (0..peak)
        .rev()
        .find(|&i| db[i] < level)
        .map(|i| crossing(i, i + 1))
        .ok_or_else(|| {
            Error::QExtraction("no -3 dB crossing below the peak; widen the grid".into())
        })?;
    let upper = (peak + 1..s.len())
        .find(|&i| db[i] < level)
        .map(|i| crossing(i - 1, i))
        .ok_or_else(|| {
            Error::QExtraction("no -3 dB crossing above the peak; widen the grid".into())
        })?;
    Ok(s.frequencies[peak] / (upper - lower))
}
