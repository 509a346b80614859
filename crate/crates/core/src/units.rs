//! Unit-suffix grammar for config files.
//!
//! A quantity is either a bare JSON number (already SI) or a string of the
//! form `<number><ws>?<prefix>?<unit>`, e.g. `"10um"`, `"0.46 um"`, `"38.8MHz"`,
//! `"90nm"`, `"169GPa"`. The unit must match the dimension the field expects;
//! the prefix is one of `G M k m u μ n p f a` (or empty).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Base unit a field is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unit {
    Meter,
    SquareMeter,
    Hertz,
    Pascal,
    Volt,
    Ampere,
    Ohm,
    Farad,
    KilogramPerCubicMeter,
    Dimensionless,
}

impl Unit {
    fn symbols(self) -> &'static [&'static str] {
        match self {
            Unit::Meter => &["m"],
            Unit::SquareMeter => &["m2", "m^2", "m²"],
            Unit::Hertz => &["Hz"],
            Unit::Pascal => &["Pa"],
            Unit::Volt => &["V"],
            Unit::Ampere => &["A"],
            Unit::Ohm => &["ohm", "Ohm", "Ω"],
            Unit::Farad => &["F"],
            Unit::KilogramPerCubicMeter => &["kg/m3", "kg/m^3", "kg/m³"],
            Unit::Dimensionless => &[""],
        }
    }

    /// Power the prefix factor is raised to (areas scale with the square).
    fn prefix_power(self) -> i32 {
        match self {
            Unit::SquareMeter => 2,
            _ => 1,
        }
    }
}

fn prefix_factor(prefix: &str) -> Option<f64> {
    Some(match prefix {
        "" => 1.0,
        "G" => 1e9,
        "M" => 1e6,
        "k" => 1e3,
        "m" => 1e-3,
        "u" | "μ" | "µ" => 1e-6,
        "n" => 1e-9,
        "p" => 1e-12,
        "f" => 1e-15,
        "a" => 1e-18,
        _ => return None,
    })
}

/// Parses a quantity string in the given unit and returns its SI value.
pub fn parse_quantity(input: &str, unit: Unit) -> Result<f64> {
    let err = |reason: &str| Error::Quantity {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let text = input.trim();
    let split = text
        .char_indices()
        .find(|&(i, c)| {
            !(c.is_ascii_digit()
                || c == '.'
                || c == '+'
                || c == '-'
                || ((c == 'e' || c == 'E')
                    && text[i + 1..]
                        .chars()
                        .next()
                        .is_some_and(|n| n.is_ascii_digit() || n == '-' || n == '+')))
        })
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let (number, suffix) = text.split_at(split);
    let value: f64 = number.parse().map_err(|_| err("malformed number"))?;
    let suffix = suffix.trim();

    if unit == Unit::Dimensionless {
        return if suffix.is_empty() {
            Ok(value)
        } else {
            Err(err("dimensionless field takes no unit"))
        };
    }
    if suffix.is_empty() {
        return Ok(value);
    }
    for symbol in unit.symbols() {
        if let Some(prefix) = suffix.strip_suffix(symbol) {
            if let Some(factor) = prefix_factor(prefix) {
                return Ok(value * factor.powi(unit.prefix_power()));
            }
        }
    }
    Err(err(&format!("expected a unit of {:?}", unit)))
}

/// Raw config value: a bare SI number or a unit-suffixed string.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuantityInput {
    Number(f64),
    Text(String),
}

impl QuantityInput {
    pub fn resolve(&self, unit: Unit) -> Result<f64> {
        match self {
            QuantityInput::Number(v) => Ok(*v),
            QuantityInput::Text(s) => parse_quantity(s, unit),
        }
    }
}

impl From<f64> for QuantityInput {
    fn from(v: f64) -> Self {
        QuantityInput::Number(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffixes_normalize_to_si() {
        let cases = [
            ("10um", Unit::Meter, 10e-6),
            ("0.46 um", Unit::Meter, 0.46e-6),
            ("90nm", Unit::Meter, 90e-9),
            ("6μm", Unit::Meter, 6e-6),
            ("2m", Unit::Meter, 2.0),
            ("38.8MHz", Unit::Hertz, 38.8e6),
            ("2GHz", Unit::Hertz, 2e9),
            ("169GPa", Unit::Pascal, 169e9),
            ("100mV", Unit::Volt, 0.1),
            ("10kohm", Unit::Ohm, 1e4),
            ("1um2", Unit::SquareMeter, 1e-12),
            ("1e-3", Unit::Meter, 1e-3),
            ("2330kg/m3", Unit::KilogramPerCubicMeter, 2330.0),
        ];
        for (text, unit, want) in cases {
            let got = parse_quantity(text, unit).unwrap();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs(),
                "{text}: {got} != {want}"
            );
        }
    }

    #[test]
    fn wrong_dimension_is_rejected() {
        assert!(parse_quantity("10MHz", Unit::Meter).is_err());
        assert!(parse_quantity("10xm", Unit::Meter).is_err());
        assert!(parse_quantity("abc", Unit::Meter).is_err());
        assert!(parse_quantity("0.3um", Unit::Dimensionless).is_err());
    }
}
