// The rotation Example taken literally, with the E13 E23 E12 triangle.

use mbqc_core::simulate::*;
use mbqc_core::transpile::pattern_to_fanout_circuit;
use mbqc_core::{Angle, Pattern, QubitId};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

fn rz(theta: f64) -> DMatrix<C64> {
    DMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar(1.0, theta),
        ],
    )
}

#[test]
fn zero_input_is_not_left_at_zero() {
    // Rz(-a)|0> would be |0> again
    let out = [QubitId(3)];
    let zero = StateVector::from_labels(&[QubitId(1)], "0").unwrap();
    for k in 1..8 {
        let t = Pattern::rotation_example(Angle::pi_fraction(k, 8));
        for b in enumerate_branches(&t, &SimOptions::default()).unwrap() {
            let (_, s) = b.on_input(&zero, &out).unwrap();
            let f = s.fidelity(&StateVector::zeros(&out)).unwrap();
            assert!(f < 1.0 - 1e-3, "k={k}: {f}");
        }
    }
}

#[test]
fn not_deterministic_and_far_from_either_rotation() {
    let o = SimOptions::default();
    for k in 1..8 {
        let a = std::f64::consts::PI * k as f64 / 8.0;
        let t = Pattern::rotation_example(Angle::pi_fraction(k, 8));
        assert!(!check_determinism(&t, 1e-9, &o).unwrap());
        for theta in [a, -a] {
            let f = pattern_unitary_fidelity(&t, &rz(theta), &o).unwrap();
            assert!((f - 0.25).abs() < 1e-9, "k={k}: {f}");
        }
    }
}

#[test]
fn fanout_translation_keeps_the_channel() {
    for k in -7..=8 {
        let t = Pattern::rotation_example(Angle::pi_fraction(k, 8));
        let (c, _) = pattern_to_fanout_circuit(&t).unwrap();
        let cmp = channels_equal(
            &pattern_channel(&t).unwrap(),
            &circuit_channel(&c, Default::default()).unwrap(),
            1e-9,
        )
        .unwrap();
        assert!(cmp.equal, "k={k}: {}", cmp.distance);
    }
}
