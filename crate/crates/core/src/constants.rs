//! Physical constants.

/// Vacuum permittivity, F/m.
pub const EPSILON_0: f64 = 8.8541878128e-12;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;
