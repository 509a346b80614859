use proptest::prelude::*;

use resokit::analytic::beam_mode;
use resokit::fab::*;
use resokit::material::silicon;
use resokit::transduction::motional_resistance;
use resokit::{BeamGeometry, Transducer, VibrationAxis};

#[test]
fn calibration_point_reproduced() {
    let p = ProcessModel::default();
    // 80 nm drawn + 10 nm etch bias = 90 nm post-etch
    let d = released_gap(80e-9, 1.19e-6, &p).unwrap();
    assert_eq!(d, 130e-9);
    // the other reading: the drawn value is already post-etch
    let post_etch = p
        .with_etch_bias(0.0)
        .unwrap()
        .with_min_drawn_gap(90e-9)
        .unwrap();
    let d = released_gap(90e-9, 1.19e-6, &post_etch).unwrap();
    assert_eq!(d, 130e-9);
}

#[test]
fn compliant_design_passes() {
    let p = ProcessModel::default();
    let t = Transducer::airgap(100e-9, 5.0, 4e-12).unwrap();
    let report = check_fab_constraints(&t, 1.0e-6, &p);
    assert!(report.passed, "{}", report.to_text());
    assert_eq!(
        report.released_gap,
        released_gap(100e-9, 1.0e-6, &p).unwrap()
    );
    let round: FabReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(round, report);
}

#[test]
fn tunnel_ceiling_is_reported() {
    let p = ProcessModel::default();
    let t = Transducer::airgap(100e-9, 5.0, 4e-12).unwrap();
    let report = check_fab_constraints(&t, 2.0 * p.max_tunnel_depth(), &p);
    assert_eq!(report.failed_rules(), vec!["max_tunnel_depth"]);
}

proptest! {
    #[test]
    fn affine_and_monotone(drawn in 80e-9..1e-6f64, depth in 0.0..5e-6f64, dd in 0.0..1e-7f64, dt in 0.0..1e-6f64) {
        let p = ProcessModel::default();
        let base = released_gap(drawn, depth, &p).unwrap();
        let deeper = released_gap(drawn, (depth + dt).min(p.max_tunnel_depth()), &p).unwrap();
        let wider = released_gap(drawn + dd, depth, &p).unwrap();
        prop_assert!(deeper >= base);
        prop_assert!(wider >= base);
        let expected = drawn + p.etch_bias() + p.release_enlargement_rate() * depth;
        prop_assert!((base - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn as_fabricated_resistance_ratio(drawn in 80e-9..500e-9f64, depth in 0.0..5e-6f64) {
        let p = ProcessModel::default();
        let g = BeamGeometry::new(10e-6, 0.46e-6, 0.4e-6, VibrationAxis::InPlane).unwrap();
        let mode = beam_mode(&g, &silicon(), 1, 0.5).unwrap();
        let t = Transducer::airgap(drawn, 5.0, 4e-12).unwrap();
        let fab = as_fabricated(&t, depth, &p).unwrap();
        let ratio = motional_resistance(&mode, &fab, 1e4).unwrap() / motional_resistance(&mode, &t, 1e4).unwrap();
        let expected = (fab.gap() / drawn).powi(4);
        prop_assert!((ratio / expected - 1.0).abs() < 1e-12);
    }
}
