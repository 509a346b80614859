//! Acceptance run: one PASS/FAIL line per check, non-zero exit on any failure.

mod common;

use std::cell::Cell;
use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use common::*;
use resokit::analytic::{beam_mode, beam_mode_frequency, disk_wineglass_frequency};
use resokit::design::*;
use resokit::fab::{released_gap, ProcessModel};
use resokit::fem::modal::rigid_mode_count;
use resokit::fem::skyline::SkylineMatrix;
use resokit::fem::*;
use resokit::material::silicon;
use resokit::transduction::*;
use resokit::{
    BeamGeometry, Detection, DiskGeometry, Geometry, MosParams, Transducer, VibrationAxis,
};

type Outcome = (bool, String);

fn fig3() -> BeamGeometry {
    BeamGeometry::new(10e-6, 0.46e-6, 0.4e-6, VibrationAxis::InPlane).unwrap()
}

fn fig4() -> DiskGeometry {
    DiskGeometry::from_diameter(6e-6, 0.4e-6).unwrap()
}

fn beam_analytic() -> Outcome {
    let si = silicon();
    let f = beam_mode_frequency(&fig3(), &si, 1).unwrap();
    let dev = f / 38.8e6 - 1.0;
    (
        dev.abs() <= 0.10,
        format!(
            "{:.3} MHz ({:+.2}% vs 38.8 MHz; in-plane, E = {} GPa, rho = {} kg/m3)",
            f / 1e6,
            dev * 100.0,
            si.youngs_modulus() / 1e9,
            si.density()
        ),
    )
}

fn beam_fem() -> Outcome {
    let (g, si) = (fig3(), silicon());
    let exact = beam_mode_frequency(&g, &si, 1).unwrap();
    let deltas: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| {
            let modes = solve_modes(&assemble_beam(&g, &si, n).unwrap(), 1).unwrap();
            (modes[0].frequency - exact).abs() / exact
        })
        .collect();
    (
        deltas[2] < 0.01 && deltas[0] > deltas[1] && deltas[1] > deltas[2],
        format!(
            "delta 16/32/64 elements = {:.3e} / {:.3e} / {:.3e}",
            deltas[0], deltas[1], deltas[2]
        ),
    )
}

fn disk() -> Outcome {
    let (g, si) = (fig4(), silicon());
    let analytic = disk_wineglass_frequency(&g, &si, 2).unwrap();
    let dev = analytic / 644e6 - 1.0;
    let coarse = disk_fem_mode_of_order(&g, &si, 16, 2)
        .unwrap()
        .mode
        .frequency();
    let fine = disk_fem_mode_of_order(&g, &si, 32, 2)
        .unwrap()
        .mode
        .frequency();
    let gate = (coarse - fine).abs() / fine;
    let fem_delta = (coarse - analytic).abs() / analytic;
    (
        dev.abs() <= 0.10 && gate < 0.005 && fem_delta < 0.05,
        format!(
            "analytic {:.2} MHz ({:+.2}% vs 644 MHz); FEM R/16 {:.2} MHz, delta {:.2}%; R/16 vs R/32 {:.3}%",
            analytic / 1e6,
            dev * 100.0,
            coarse / 1e6,
            fem_delta * 100.0,
            gate * 100.0
        ),
    )
}

fn rx_scaling() -> Outcome {
    let mode = beam_mode(&fig3(), &silicon(), 1, 0.5).unwrap();
    let strategy = (
        20e-9..500e-9f64,
        0.5..50.0f64,
        1e2..1e6f64,
        1e-13..1e-10f64,
        1.0..12.0f64,
        1.1..3.0f64,
    );
    let mut runner = TestRunner::new(Config {
        cases: 512,
        failure_persistence: None,
        ..Config::default()
    });
    let rx = |d: f64, v: f64, q: f64, s: f64, er: f64| {
        let t = Transducer::new(d, v, 0.1, s, er, Detection::Capacitive).unwrap();
        motional_resistance(&mode, &t, q).unwrap()
    };
    let worst = Cell::new(0.0f64);
    let worst_circuit = Cell::new(0.0f64);
    let result = runner.run(&strategy, |(d, v, q, s, er, a)| {
        let base = rx(d, v, q, s, er);
        let ratios = [
            rx(a * d, v, q, s, er) / base / a.powi(4),
            rx(d, a * v, q, s, er) / base * a * a,
            rx(d, v, a * q, s, er) / base * a,
            rx(d, v, q, a * s, er) / base * a * a,
            rx(d, v, q, s, (a * er).min(30.0)) / base * ((a * er).min(30.0) / er).powi(2),
        ];
        for r in ratios {
            worst.set(worst.get().max((r - 1.0).abs()));
            prop_assert!((r - 1.0).abs() < 1e-9);
        }
        let t = Transducer::new(d, v, 0.1, s, er, Detection::Capacitive).unwrap();
        let c = equivalent_circuit(&mode, &t, q).unwrap();
        let e = (c.r_x() / base - 1.0).abs();
        worst_circuit.set(worst_circuit.get().max(e));
        prop_assert!(e < 1e-12);
        Ok(())
    });
    (
        result.is_ok(),
        format!(
            "512 cases; worst scaling error {:.1e}, circuit vs formula {:.1e}",
            worst.get(),
            worst_circuit.get()
        ),
    )
}

fn q_round_trip() -> Outcome {
    let g = fig3();
    let mode = beam_mode(&g, &silicon(), 1, 0.5).unwrap();
    let t = Transducer::airgap(90e-9, 5.0, g.length() * g.thickness()).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for q in [1e3, 1e4, 5e4] {
        let c = equivalent_circuit(&mode, &t, q).unwrap();
        let (f0, span) = (c.f0(), 6.0 / q);
        let s = transmission_spectrum(
            &c,
            DEFAULT_TERMINATION,
            f0 * (1.0 - span),
            f0 * (1.0 + span),
            4001,
        )
        .unwrap();
        let got = extract_q(&s).unwrap();
        let err = (got / q - 1.0).abs();
        ok &= err < 0.01;
        parts.push(format!("Q {q:.0e} -> {got:.1} ({:.3}%)", err * 100.0));
    }
    (ok, parts.join(", "))
}

fn detection() -> Outcome {
    let g = fig3();
    let t = Transducer::new(
        90e-9,
        5.0,
        0.1,
        g.length() * g.thickness(),
        1.0,
        Detection::Mos(MosParams::new(1e-4, 1.0).unwrap()),
    )
    .unwrap();
    let scales = [1.0, 0.8, 0.6, 0.4, 0.2];
    let pts = detection_comparison(&Geometry::Beam(g), &silicon(), &t, 1e4, &scales).unwrap();
    let increasing = pts.windows(2).all(|w| w[1].ratio > w[0].ratio);
    let expected = detection_ratio_exponent(1.0);
    let worst = pts
        .windows(2)
        .map(|w| ((w[1].ratio / w[0].ratio).ln() / (w[1].scale / w[0].scale).ln() - expected).abs())
        .fold(0.0, f64::max);
    (
        increasing && worst < 1e-6,
        format!(
            "ratio {:.3e} -> {:.3e} over s = 1 .. 0.2; slope error {worst:.1e} vs {expected}",
            pts[0].ratio, pts[4].ratio
        ),
    )
}

fn fab() -> Outcome {
    let p = ProcessModel::default();
    let d = released_gap(80e-9, 1.19e-6, &p).unwrap();
    let g = fig3();
    let mode = beam_mode(&g, &silicon(), 1, 0.5).unwrap();
    let drawn = Transducer::airgap(90e-9, 5.0, g.length() * g.thickness()).unwrap();
    let released = drawn.with_gap(d).unwrap();
    let ratio = motional_resistance(&mode, &released, 1e4).unwrap()
        / motional_resistance(&mode, &drawn, 1e4).unwrap();
    let err = (ratio / (130.0f64 / 90.0).powi(4) - 1.0).abs();
    (
        d == 130e-9 && err < 1e-9,
        format!(
            "80 nm drawn + 10 nm etch, 1.19 um tunnel -> {:.6} nm; R_x ratio error {err:.1e}",
            d * 1e9
        ),
    )
}

fn profiles() -> Outcome {
    let p = oscillator_profile(2).unwrap();
    let exact =
        p.center_frequency == FrequencyTarget::Center(76.8e6) && p.q_required == Some(50000.0);
    let c = hand_candidate();
    let tol = Tolerances::standard();
    let osc = check_spec(&c, &p, &tol);
    let vco = check_spec(&c, &vco_profile(), &tol);
    let tuning_fails = vco.criterion("tuning").map(|r| r.status) == Some(Status::Fail);
    (
        exact && osc.passed && tuning_fails,
        format!(
            "beam {:.4} um: {:.4} MHz, R_x {:.0} ohm -> oscillator {}; VCO tuning {:.3} MHz < 200 MHz",
            HAND_LENGTH * 1e6,
            c.analysis.frequency / 1e6,
            c.analysis.motional_resistance,
            if osc.passed { "pass" } else { "fail" },
            c.analysis.tuning_range / 1e6
        ),
    )
}

fn optimizer() -> Outcome {
    let p = oscillator_profile(2).unwrap();
    let tol = Tolerances::standard();
    let run = || {
        optimize(
            &p,
            &oscillator_space(),
            &ProcessModel::default(),
            &tol,
            &OptimizerSettings::default(),
        )
        .unwrap()
    };
    let got = run();
    let again = run();
    let (count, feasible) = verification_grid();
    let grid_best = feasible.iter().map(|q| q.rx).fold(f64::INFINITY, f64::min);
    let all_feasible = got.iter().all(|c| {
        let Geometry::Beam(b) = c.inputs.geometry else {
            return false;
        };
        c.verify().is_ok()
            && feasibility_failures(c, &p, &tol).is_empty()
            && oracle(
                b.length(),
                b.width(),
                b.thickness(),
                c.inputs.transducer.gap(),
                c.inputs.transducer.bias_voltage(),
            )
            .is_some()
    });
    let best = got[0].analysis.motional_resistance;
    (
        all_feasible && best <= grid_best && got == again,
        format!(
            "{} results, best R_x {best:.2} ohm vs grid best {grid_best:.2} ohm ({} of {count} grid points feasible)",
            got.len(),
            feasible.len()
        ),
    )
}

fn eigensolver() -> Outcome {
    let (m1, m2, k1, k2, k3) = (1.5, 0.7, 200.0, 35.0, 120.0);
    let mut k = SkylineMatrix::zeros(vec![0, 0]);
    k.add(0, 0, k1 + k2);
    k.add(1, 0, -k2);
    k.add(1, 1, k2 + k3);
    let mut m = SkylineMatrix::zeros(vec![0, 0]);
    m.add(0, 0, m1);
    m.add(1, 1, m2);
    let sys = AssembledSystem {
        stiffness: k,
        mass: m,
        dof_map: DofMap {
            dofs_per_node: 1,
            kinds: vec![DofKind::Translation(0); 2],
        },
        constraints: BTreeSet::new(),
        mesh: Mesh::new(
            vec![[0.0, 0.0], [1.0, 0.0]],
            vec![vec![0, 1]],
            MeshKind::Beam1d,
        )
        .unwrap(),
    };
    let (a, d, b) = ((k1 + k2) / m1, (k2 + k3) / m2, k2 * k2 / (m1 * m2));
    let disc = ((a - d).powi(2) + 4.0 * b).sqrt();
    let exact = [0.5 * (a + d - disc), 0.5 * (a + d + disc)];
    let modes = solve_modes(&sys, 2).unwrap();
    let two_dof = modes
        .iter()
        .zip(exact)
        .map(|(m, e)| (m.eigenvalue / e - 1.0).abs())
        .fold(0.0, f64::max);

    let g = fig4();
    let mesh = mesh_disk(&g, g.radius() / 16.0).unwrap();
    let disk_sys = assemble_disk(&g, &silicon(), &mesh).unwrap();
    let disk_modes = solve_modes(&disk_sys, 12).unwrap();
    let rigid = rigid_mode_count(&disk_modes);
    let beam_sys = assemble_beam(&fig3(), &silicon(), 64).unwrap();
    let beam_modes = solve_modes(&beam_sys, 6).unwrap();

    let mut residual: f64 = 0.0;
    let mut ortho: f64 = 0.0;
    for (sys, modes) in [(&disk_sys, &disk_modes), (&beam_sys, &beam_modes)] {
        for (i, x) in modes.iter().enumerate() {
            residual = residual.max(x.residual);
            for y in &modes[i + 1..] {
                let xy = sys.mass.bilinear(&x.vector, &y.vector);
                let xx = sys.mass.bilinear(&x.vector, &x.vector);
                let yy = sys.mass.bilinear(&y.vector, &y.vector);
                ortho = ortho.max(xy.abs() / (xx * yy).sqrt());
            }
        }
    }
    (
        two_dof < 1e-10 && residual < 1e-8 && rigid == 3 && ortho < 1e-6,
        format!(
            "2-dof error {two_dof:.1e}; max residual {residual:.1e}; free-disk rigid modes {rigid}; max M-coupling {ortho:.1e}"
        ),
    )
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("beam analytic frequency", beam_analytic),
        ("beam FEM convergence", beam_fem),
        ("disk wine-glass analytic and FEM", disk),
        ("motional resistance scaling", rx_scaling),
        ("spectrum Q round trip", q_round_trip),
        ("MOS vs capacitive detection trend", detection),
        ("fabrication gap model", fab),
        ("application profiles", profiles),
        ("optimizer soundness", optimizer),
        ("eigensolver correctness", eigensolver),
    ];
    let mut failures = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        if !ok {
            failures += 1;
        }
        println!(
            "{:>2} {:<36} {}  {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            detail
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        checks.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
