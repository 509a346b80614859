use serde::{Deserialize, Serialize};

use crate::constants::TWO_PI;
use crate::error::{invariant, require_positive, Error, Result};
use crate::mode::ModeResult;
use crate::transducer::Transducer;
use crate::transduction::electrostatics::transduction_factor;

const CONSISTENCY: f64 = 1e-9;

/// Series R-L-C motional branch plus the static electrode capacitance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CircuitInput")]
pub struct EquivalentCircuit {
    r_x: f64,
    l_x: f64,
    c_x: f64,
    c0: f64,
    q: f64,
    f0: f64,
}

impl EquivalentCircuit {
    /// Builds from the four elements; f0 and Q follow.
    pub fn from_elements(r_x: f64, l_x: f64, c_x: f64, c0: f64) -> Result<Self> {
        for (field, v) in [("r_x", r_x), ("l_x", l_x), ("c_x", c_x), ("c0", c0)] {
            require_positive(field, v)?;
        }
        Ok(Self {
            r_x,
            l_x,
            c_x,
            c0,
            q: (l_x / c_x).sqrt() / r_x,
            f0: 1.0 / (TWO_PI * (l_x * c_x).sqrt()),
        })
    }

    fn checked(self) -> Result<Self> {
        let derived = Self::from_elements(self.r_x, self.l_x, self.c_x, self.c0)?;
        require_positive("q", self.q)?;
        require_positive("f0", self.f0)?;
        if (derived.f0 / self.f0 - 1.0).abs() > CONSISTENCY {
            return Err(invariant("f0", "inconsistent with 1/(2π·sqrt(l_x·c_x))"));
        }
        if (derived.q / self.q - 1.0).abs() > CONSISTENCY {
            return Err(invariant("q", "inconsistent with sqrt(l_x/c_x)/r_x"));
        }
        Ok(self)
    }

    pub fn r_x(&self) -> f64 {
        self.r_x
    }

    pub fn l_x(&self) -> f64 {
        self.l_x
    }

    pub fn c_x(&self) -> f64 {
        self.c_x
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CircuitRecord {
            schema_version: 1,
            circuit: *self,
            netlist: self.netlist(),
        })
        .expect("plain numbers serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }

    /// SPICE-flavoured element list: port `in`, port `out`, ground `0`.
    pub fn netlist(&self) -> Vec<String> {
        vec![
            format!("C0in in 0 {:e}", self.c0),
            format!("Rx in n1 {:e}", self.r_x),
            format!("Lx n1 n2 {:e}", self.l_x),
            format!("Cx n2 out {:e}", self.c_x),
            format!("C0out out 0 {:e}", self.c0),
        ]
    }
}

#[derive(Serialize)]
struct CircuitRecord {
    schema_version: u32,
    #[serde(flatten)]
    circuit: EquivalentCircuit,
    netlist: Vec<String>,
}

#[derive(Deserialize)]
struct CircuitInput {
    #[serde(default)]
    #[allow(dead_code)]
    schema_version: Option<u32>,
    r_x: f64,
    l_x: f64,
    c_x: f64,
    c0: f64,
    q: f64,
    f0: f64,
    #[serde(default)]
    #[allow(dead_code)]
    netlist: Option<Vec<String>>,
}

impl TryFrom<CircuitInput> for EquivalentCircuit {
    type Error = Error;

    fn try_from(raw: CircuitInput) -> Result<Self> {
        Self {
            r_x: raw.r_x,
            l_x: raw.l_x,
            c_x: raw.c_x,
            c0: raw.c0,
            q: raw.q,
            f0: raw.f0,
        }
        .checked()
    }
}

/// Electrical image of `mode` seen through `t`:
/// L_x = m/η², C_x = η²/k, R_x = sqrt(k·m)/(Q·η²), C₀ = ε₀ε_rS/d₀.
pub fn equivalent_circuit(mode: &ModeResult, t: &Transducer, q: f64) -> Result<EquivalentCircuit> {
    require_positive("q", q)?;
    if t.bias_voltage() == 0.0 {
        return Err(Error::ZeroBias);
    }
    let eta2 = transduction_factor(t).powi(2);
    let (m, k) = (mode.effective_mass(), mode.effective_stiffness());
    EquivalentCircuit {
        r_x: (k * m).sqrt() / (q * eta2),
        l_x: m / eta2,
        c_x: eta2 / k,
        c0: t.static_capacitance(),
        q,
        f0: mode.frequency(),
    }
    .checked()
}
