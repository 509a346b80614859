use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};

/// Closed interval [lo, hi]; serialized as a two-element array.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(invariant(
                "interval",
                format!("[{lo}, {hi}] is empty or not finite"),
            ));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(v: f64) -> Result<Self> {
        Self::new(v, v)
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// `n` evenly spaced points including both ends (one point if degenerate).
    pub fn samples(&self, n: usize) -> Vec<f64> {
        if n <= 1 || self.lo == self.hi {
            return vec![if n <= 1 { self.midpoint() } else { self.lo }];
        }
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Interval::new(v[0], v[1])
    }
}

impl From<Interval> for [f64; 2] {
    fn from(i: Interval) -> Self {
        [i.lo, i.hi]
    }
}

/// A single centre frequency or a list of acceptable bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyTarget {
    Center(f64),
    Bands(Vec<Interval>),
}

/// Application requirements. `None` marks a criterion the application does
/// not specify; the checker reports it as not applicable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileInput")]
pub struct SpecProfile {
    pub name: String,
    pub center_frequency: FrequencyTarget,
    pub q_required: Option<f64>,
    pub bandpass: Option<Interval>,
    pub impedance_range: Option<Interval>,
    pub dc_voltage_range: Option<Interval>,
    pub tuning_required: Option<f64>,
    /// Stored verbatim, never evaluated.
    pub informational: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileInput {
    #[serde(default)]
    #[allow(dead_code)]
    schema_version: Option<u32>,
    name: String,
    center_frequency: FrequencyTarget,
    #[serde(default)]
    q_required: Option<f64>,
    #[serde(default)]
    bandpass: Option<Interval>,
    #[serde(default)]
    impedance_range: Option<Interval>,
    #[serde(default)]
    dc_voltage_range: Option<Interval>,
    #[serde(default)]
    tuning_required: Option<f64>,
    #[serde(default)]
    informational: BTreeMap<String, String>,
}

impl TryFrom<ProfileInput> for SpecProfile {
    type Error = Error;

    fn try_from(raw: ProfileInput) -> Result<Self> {
        SpecProfile {
            name: raw.name,
            center_frequency: raw.center_frequency,
            q_required: raw.q_required,
            bandpass: raw.bandpass,
            impedance_range: raw.impedance_range,
            dc_voltage_range: raw.dc_voltage_range,
            tuning_required: raw.tuning_required,
            informational: raw.informational,
        }
        .validated()
    }
}

impl SpecProfile {
    pub fn validated(self) -> Result<Self> {
        let positive = |field: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invariant(field, format!("must be > 0, got {v}")))
            }
        };
        match &self.center_frequency {
            FrequencyTarget::Center(f) => positive("center_frequency", *f)?,
            FrequencyTarget::Bands(bands) => {
                if bands.is_empty() {
                    return Err(invariant("center_frequency", "band list is empty"));
                }
                for b in bands {
                    positive("center_frequency", b.lo())?;
                }
            }
        }
        if let Some(q) = self.q_required {
            positive("q_required", q)?;
        }
        if let Some(t) = self.tuning_required {
            positive("tuning_required", t)?;
        }
        for (field, range) in [
            ("bandpass", self.bandpass),
            ("impedance_range", self.impedance_range),
            ("dc_voltage_range", self.dc_voltage_range),
        ] {
            if let Some(r) = range {
                if r.lo() < 0.0 {
                    return Err(invariant(field, "must be non-negative"));
                }
            }
        }
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Frequencies worth aiming at: the centre, or each band's midpoint.
    pub fn nominal_frequencies(&self) -> Vec<f64> {
        match &self.center_frequency {
            FrequencyTarget::Center(f) => vec![*f],
            FrequencyTarget::Bands(b) => b.iter().map(Interval::midpoint).collect(),
        }
    }
}

/// Reference-oscillator harmonic base frequency, Hz.
pub const OSCILLATOR_BASE: f64 = 38.4e6;

fn info(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

fn mhz(lo: f64, hi: f64) -> Interval {
    Interval::new(lo * 1e6, hi * 1e6).expect("literal band")
}

const TEMPERATURE: &str = "-40 to +100 °C";

/// Reference oscillator at N × 38.4 MHz with Q = 100000/N.
pub fn oscillator_profile(n: u32) -> Result<SpecProfile> {
    if n == 0 {
        return Err(invariant("n", "harmonic index must be >= 1"));
    }
    SpecProfile {
        name: format!("oscillator-n{n}"),
        center_frequency: FrequencyTarget::Center(n as f64 * OSCILLATOR_BASE),
        q_required: Some(100_000.0 / n as f64),
        bandpass: None,
        impedance_range: Some(Interval::new(50.0, 10e3)?),
        dc_voltage_range: Some(Interval::new(1.2, 5.0)?),
        tuning_required: None,
        informational: info(&[
            ("phase_noise", "-117 dBc/Hz @ 400 kHz, -160 dBc/Hz @ 20 MHz"),
            ("temperature_range", TEMPERATURE),
            (
                "stability_temperature",
                "+/- 0.1 ppm/°C (quartz with compensation)",
            ),
            ("stability_aging", "10 ppm over 10 years (quartz)"),
            ("tuning_range", "if possible"),
        ]),
    }
    .validated()
}

pub fn vco_profile() -> SpecProfile {
    SpecProfile {
        name: "vco".into(),
        center_frequency: FrequencyTarget::Center(2e9),
        q_required: Some(1000.0),
        bandpass: None,
        impedance_range: None,
        dc_voltage_range: Some(Interval::point(2.4).expect("literal")),
        tuning_required: Some(200e6),
        informational: info(&[
            ("phase_noise", "-140.7 dBc/Hz @ 600 kHz"),
            ("temperature_range", TEMPERATURE),
            ("tuning_range", ">200-300 MHz"),
        ]),
    }
}

fn filter(
    name: &str,
    bands: Vec<Interval>,
    bandpass: Interval,
    extra: &[(&str, &str)],
) -> SpecProfile {
    let mut informational = info(&[
        ("temperature_range", TEMPERATURE),
        ("tuning_range", "if possible"),
    ]);
    informational.extend(info(extra));
    SpecProfile {
        name: name.into(),
        center_frequency: FrequencyTarget::Bands(bands),
        q_required: None,
        bandpass: Some(bandpass),
        impedance_range: Some(Interval::point(50.0).expect("literal")),
        dc_voltage_range: None,
        tuning_required: None,
        informational,
    }
}

fn filter_profiles() -> Vec<SpecProfile> {
    let general = [("insertion_loss", "-1.5 dB"), ("rejection", "-35 dB")];
    let gsm = [("insertion_loss", "-2.5 dB"), ("rejection", "-30 dB")];
    vec![
        filter(
            "wimax",
            vec![mhz(2300.0, 2700.0), mhz(3300.0, 3700.0)],
            mhz(1.5, 10.0),
            &general,
        ),
        filter(
            "wifi",
            vec![mhz(2400.0, 2500.0), mhz(4900.0, 5900.0)],
            mhz(20.0, 20.0),
            &general,
        ),
        filter(
            "dvb-h",
            vec![mhz(450.0, 850.0)],
            mhz(5.0, 8.0),
            &[
                general[0],
                general[1],
                ("bandpass_channels", "5, 6, 7 or 8 MHz"),
            ],
        ),
        filter(
            "gsm-egsb-tx",
            vec![mhz(850.0, 915.0)],
            mhz(35.0, 35.0),
            &gsm,
        ),
        filter(
            "gsm-egsb-rx",
            vec![mhz(925.0, 960.0)],
            mhz(35.0, 35.0),
            &gsm,
        ),
        filter(
            "gsm-dsc-tx",
            vec![mhz(1710.0, 1785.0)],
            mhz(75.0, 75.0),
            &gsm,
        ),
        filter(
            "gsm-dsc-rx",
            vec![mhz(1805.0, 1880.0)],
            mhz(75.0, 75.0),
            &gsm,
        ),
    ]
}

/// Every shipped profile: oscillators N = 1..4, the VCO, and the filter bands.
pub fn builtin_profiles() -> Vec<SpecProfile> {
    let mut out: Vec<SpecProfile> = (1..=4)
        .map(|n| oscillator_profile(n).expect("valid harmonic"))
        .collect();
    out.push(vco_profile());
    out.extend(filter_profiles());
    out
}

/// Looks up a built-in profile; `oscillator-n<N>` works for any N ≥ 1.
pub fn find_profile(name: &str) -> Result<SpecProfile> {
    if let Some(n) = name
        .strip_prefix("oscillator-n")
        .and_then(|s| s.parse::<u32>().ok())
    {
        if n >= 1 {
            return oscillator_profile(n);
        }
    }
    builtin_profiles()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownProfile(name.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup() {
        assert_eq!(
            find_profile("oscillator-n7").unwrap().q_required,
            Some(100_000.0 / 7.0)
        );
        assert!(matches!(
            find_profile("nope"),
            Err(Error::UnknownProfile(_))
        ));
        assert!(find_profile("oscillator-n0").is_err());
    }

    #[test]
    fn json_round_trip() {
        for p in builtin_profiles() {
            assert_eq!(SpecProfile::from_json(&p.to_json()).unwrap(), p);
        }
        assert!(
            SpecProfile::from_json(r#"{"name":"x","center_frequency":{"center":-1}}"#).is_err()
        );
        assert!(Interval::new(2.0, 1.0).is_err());
    }

    #[test]
    fn samples_cover_ends() {
        let i = Interval::new(1.0, 2.0).unwrap();
        assert_eq!(i.samples(3), vec![1.0, 1.5, 2.0]);
        assert_eq!(Interval::point(3.0).unwrap().samples(4), vec![3.0]);
    }
}
