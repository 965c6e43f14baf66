use vorocell::figures;
use vorocell::verify::{verify_theorem, TheoremConfig, SUITE_BOUNDARY, SUITE_CLOSURE};
use vorocell::Error;

fn bypass() -> TheoremConfig {
    TheoremConfig { allow_gate_bypass: true, ..TheoremConfig::default() }
}

#[test]
fn euclidean_cells_pass() {
    let scene = figures::fig1();
    for k in [0, 3] {
        let r = verify_theorem(&scene, k, 200, 11, &TheoremConfig::default()).unwrap();
        assert!(r.passed(), "{}", r.to_json());
        assert!(r.expected_failures.is_none());
    }
}

#[test]
fn fig2_norm_cell_passes() {
    let r = verify_theorem(&figures::fig2(), 1, 200, 5, &TheoremConfig::default()).unwrap();
    assert!(r.passed(), "{}", r.to_json());
}

#[test]
fn gates_block_counterexamples() {
    for scene in [figures::fig3(), figures::overlap()] {
        let e = verify_theorem(&scene, 0, 10, 0, &TheoremConfig::default()).unwrap_err();
        assert!(matches!(e, Error::PreconditionFailed(_)), "{e}");
    }
}

#[test]
fn sup_norm_counterexample_fails_as_predicted() {
    let r = verify_theorem(&figures::fig3(), 0, 300, 7, &bypass()).unwrap();
    assert!(!r.passed());
    assert_eq!(r.failing_suites(), vec![SUITE_BOUNDARY, SUITE_CLOSURE], "{}", r.to_json());
    assert!(r.reproduces_expected_failure());
}

#[test]
fn overlap_counterexample_fails_as_predicted() {
    let r = verify_theorem(&figures::overlap(), 0, 300, 7, &bypass()).unwrap();
    assert_eq!(r.failing_suites(), vec![SUITE_BOUNDARY, SUITE_CLOSURE], "{}", r.to_json());
    assert!(r.reproduces_expected_failure());
}

#[test]
fn theorem_report_is_reproducible() {
    let scene = figures::fig1();
    let a = verify_theorem(&scene, 2, 100, 3, &TheoremConfig::default()).unwrap().to_json();
    let b = verify_theorem(&scene, 2, 100, 3, &TheoremConfig::default()).unwrap().to_json();
    assert_eq!(a, b);
}
