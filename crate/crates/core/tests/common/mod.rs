//! Closed-form oracle shared by the design and acceptance tests. Nothing
//! here calls into the library's physics; constants are frozen literals.
#![allow(dead_code)]

use resokit::design::{Bounds, DesignCandidate, DesignInputs, DesignSpace, Family, Interval};
use resokit::fab::ProcessModel;
use resokit::material::silicon;
use resokit::transducer::{Detection, DEFAULT_DRIVE_VOLTAGE};
use resokit::{BeamGeometry, Geometry, Transducer, VibrationAxis};

pub const E: f64 = 169e9;
pub const RHO: f64 = 2330.0;
pub const EPS0: f64 = 8.8541878128e-12;
/// First root of cos λ · cosh λ = 1.
pub const LAMBDA1: f64 = 4.730040744862704;
/// Clamped-clamped fundamental m_eff / (ρAL) at midspan.
pub const MASS_FRACTION: f64 = 0.396477920160514;
pub const ETCH_BIAS: f64 = 10e-9;
pub const MIN_DRAWN: f64 = 80e-9;

pub const OSC_CENTER: f64 = 76.8e6;
pub const OSC_Q: f64 = 50_000.0;
pub const FREQ_TOL: f64 = 0.005;

/// Hand sizing for the N = 2 oscillator: in-plane beam whose softened
/// frequency at 5 V across a 90 nm released gap is 76.8 MHz.
pub const HAND_LENGTH: f64 = 7.5441555834150774e-6;
pub const HAND_WIDTH: f64 = 0.5e-6;
pub const HAND_THICKNESS: f64 = 4e-6;
pub const HAND_RX: f64 = 4952.1082931712614;
pub const HAND_VPI: f64 = 51.295378725768095;

pub struct OraclePoint {
    pub length: f64,
    pub width: f64,
    pub thickness: f64,
    pub drawn_gap: f64,
    pub bias: f64,
    pub frequency: f64,
    pub rx: f64,
    pub v_pi: f64,
}

/// Evaluates one in-plane beam design; `None` means infeasible for the
/// N = 2 oscillator (±0.5%, 50 Ω–10 kΩ, 1.2–5 V, fab floor, 0.8·V_PI).
pub fn oracle(
    length: f64,
    width: f64,
    thickness: f64,
    drawn_gap: f64,
    bias: f64,
) -> Option<OraclePoint> {
    if length <= width.max(thickness) || drawn_gap < MIN_DRAWN {
        return None;
    }
    let d = drawn_gap + ETCH_BIAS;
    let f =
        LAMBDA1 * LAMBDA1 / (2.0 * std::f64::consts::PI * 12f64.sqrt()) * (E / RHO).sqrt() * width
            / (length * length);
    let omega = 2.0 * std::f64::consts::PI * f;
    let m = MASS_FRACTION * RHO * width * thickness * length;
    let k = omega * omega * m;
    let s = length * thickness;
    let ke = bias * bias * EPS0 * s / d.powi(3);
    if ke >= k {
        return None;
    }
    let frequency = f * (1.0 - ke / k).sqrt();
    let rx = k / (omega * bias * bias) * d.powi(4) / (EPS0 * s).powi(2) / OSC_Q;
    let v_pi = (8.0 * k * d.powi(3) / (27.0 * EPS0 * s)).sqrt();
    let ok = (frequency - OSC_CENTER).abs() <= FREQ_TOL * OSC_CENTER
        && (50.0..=10e3).contains(&rx)
        && (1.2..=5.0).contains(&bias)
        && bias <= 0.8 * v_pi;
    ok.then_some(OraclePoint {
        length,
        width,
        thickness,
        drawn_gap,
        bias,
        frequency,
        rx,
        v_pi,
    })
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i == n - 1 {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

pub const LENGTH_BOUNDS: (f64, f64) = (5.5e-6, 8.5e-6);
pub const WIDTH_BOUNDS: (f64, f64) = (0.3e-6, 0.6e-6);
pub const THICKNESS_BOUNDS: (f64, f64) = (1e-6, 4e-6);
pub const GAP_BOUNDS: (f64, f64) = (80e-9, 120e-9);
pub const BIAS_BOUNDS: (f64, f64) = (1.2, 5.0);

/// 160 lengths × 5 widths × 5 thicknesses × 5 gaps × 5 biases = 10⁵ points.
pub fn verification_grid() -> (usize, Vec<OraclePoint>) {
    let ls = linspace(LENGTH_BOUNDS.0, LENGTH_BOUNDS.1, 160);
    let ws = linspace(WIDTH_BOUNDS.0, WIDTH_BOUNDS.1, 5);
    let ts = linspace(THICKNESS_BOUNDS.0, THICKNESS_BOUNDS.1, 5);
    let gs = linspace(GAP_BOUNDS.0, GAP_BOUNDS.1, 5);
    let vs = linspace(BIAS_BOUNDS.0, BIAS_BOUNDS.1, 5);
    let mut count = 0;
    let mut feasible = Vec::new();
    for &l in &ls {
        for &w in &ws {
            for &t in &ts {
                for &g in &gs {
                    for &v in &vs {
                        count += 1;
                        if let Some(p) = oracle(l, w, t, g, v) {
                            feasible.push(p);
                        }
                    }
                }
            }
        }
    }
    (count, feasible)
}

fn iv(b: (f64, f64)) -> Interval {
    Interval::new(b.0, b.1).unwrap()
}

pub fn oscillator_space() -> DesignSpace {
    DesignSpace {
        bounds: Bounds {
            family: Family::Beam,
            vibration_axis: VibrationAxis::InPlane,
            size: iv(LENGTH_BOUNDS),
            width: Some(iv(WIDTH_BOUNDS)),
            thickness: iv(THICKNESS_BOUNDS),
            drawn_gap: iv(GAP_BOUNDS),
            bias_voltage: iv(BIAS_BOUNDS),
        },
        material: silicon(),
        assumed_q: None,
        tunnel_depth: 0.0,
        drive_voltage: DEFAULT_DRIVE_VOLTAGE,
        electrode_fraction: None,
        gap_rel_permittivity: 1.0,
        detection: Detection::Capacitive,
    }
}

pub fn hand_inputs(bias: f64, q: f64) -> DesignInputs {
    let g = BeamGeometry::new(
        HAND_LENGTH,
        HAND_WIDTH,
        HAND_THICKNESS,
        VibrationAxis::InPlane,
    )
    .unwrap();
    DesignInputs {
        geometry: Geometry::Beam(g),
        material: silicon(),
        transducer: Transducer::airgap(MIN_DRAWN, bias, g.facing_area()).unwrap(),
        assumed_q: q,
        tunnel_depth: 0.0,
        process: ProcessModel::default(),
        tuning_voltage_range: None,
    }
}

/// The hand-sized N = 2 oscillator candidate (5 V bias, Q = 50000).
pub fn hand_candidate() -> DesignCandidate {
    DesignCandidate::analyze(hand_inputs(5.0, OSC_Q)).unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}
