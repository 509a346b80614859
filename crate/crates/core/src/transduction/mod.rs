//! Electromechanical layer: motional resistance, equivalent circuit,
//! transmission spectra, drive amplitude, bias tuning, pull-in and readout
//! currents.

pub mod circuit;
pub mod detection;
pub mod electrostatics;
pub mod spectrum;

pub use circuit::{equivalent_circuit, EquivalentCircuit};
pub use detection::{
    capacitive_output_current, detection_comparison, detection_csv, detection_ratio_exponent,
    mos_output_current, DetectionPoint,
};
pub use electrostatics::{
    electrostatic_spring, instability_voltage, motional_resistance, pull_in_voltage,
    resonant_amplitude, spring_softening_frequency, transduction_factor,
};
pub use spectrum::{extract_q, transmission, transmission_spectrum, Spectrum, DEFAULT_TERMINATION};
