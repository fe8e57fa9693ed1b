use std::f64::consts::PI;

use hqa_core::model::{build_effective, build_lab_frame, rotating_transform, HybridProblemSpec};
use hqa_core::{HilbertSpace, LinOp, C64};

fn appendix() -> (HybridProblemSpec, HilbertSpace) {
    (
        HybridProblemSpec::single_pair(153.9, 153.7, 154.1, 0.55, 0.30, 0.15, 0.25),
        HilbertSpace::qubits_and_resonators(1, 1, 8).unwrap(),
    )
}

#[test]
fn frame_change_is_a_global_phase_at_whole_periods() {
    let (spec, space) = appendix();
    for n in [1usize, 2, 3, 1000, 9998] {
        let t = 2.0 * PI * n as f64 / 153.9;
        let u = rotating_transform(&space, &spec, t).unwrap();
        let phase = u.matrix()[(0, 0)];
        // σz/2 contributes e^{±iπn}, the photon number e^{2πin}.
        let expected = if n % 2 == 0 { 1.0 } else { -1.0 };
        assert!((phase - C64::new(expected, 0.0)).norm() < 1e-9, "n={n}: {phase}");
        let scaled = LinOp::identity_on(&space).scale_complex(phase);
        assert!(u.max_abs_diff(&scaled).unwrap() < 1e-9, "n={n}");
    }
}

#[test]
fn frame_change_is_unitary() {
    let (spec, space) = appendix();
    let u = rotating_transform(&space, &spec, 0.123).unwrap();
    let uu = &u.adjoint() * &u;
    assert!(uu.max_abs_diff(&LinOp::identity_on(&space)).unwrap() < 1e-14);
}

#[test]
fn lab_frame_is_periodic_in_the_drive() {
    let (spec, space) = appendix();
    let period = 2.0 * PI / 153.9;
    for t in [0.0, 0.01, 1.7] {
        let a = build_lab_frame(&spec, &space, t).unwrap();
        let b = build_lab_frame(&spec, &space, t + period).unwrap();
        assert!(a.problem.max_abs_diff(&b.problem).unwrap() < 1e-10);
        assert!(a.driver.max_abs_diff(&b.driver).unwrap() < 1e-10);
    }
}

#[test]
fn effective_problem_is_invariant_under_the_frame_change() {
    let (spec, space) = appendix();
    let eff = build_effective(&spec, &space).unwrap();
    for n in [1usize, 9998] {
        let u = rotating_transform(&space, &spec, 2.0 * PI * n as f64 / 153.9).unwrap();
        let back = &(&u.adjoint() * &eff.problem) * &u;
        assert!(back.max_abs_diff(&eff.problem).unwrap() < 1e-10);
    }
}
