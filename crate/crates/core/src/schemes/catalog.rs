//! The four built-in schemes, addressable by name.

use super::{
    CorrectionKind, Local, Observable, Preparation, Scheme, SchemeCommand, SchemePattern,
    UnitaryKind,
};
use crate::angle::Angle;
use crate::circuit::Gate;
use crate::pattern::{QubitId, Signal};

pub const SCHEME_NAMES: [&str; 4] = ["oneway", "transfer", "circuit", "ancilla"];

const Q1: QubitId = QubitId(1);
const Q2: QubitId = QubitId(2);

fn plus() -> Preparation {
    Preparation {
        name: "plus".into(),
        circuit: Local::new(1, vec![Gate::Hadamard(Q1)]),
    }
}

fn unitary(name: &str, arity: usize, gates: Vec<Gate>) -> UnitaryKind {
    UnitaryKind {
        name: name.into(),
        circuit: Local::new(arity, gates),
    }
}

fn observable(
    name: &str,
    arity: usize,
    basis: Vec<Gate>,
    parametric: bool,
    destructive: bool,
) -> Observable {
    Observable {
        name: name.into(),
        basis: Local::new(arity, basis),
        parametric,
        destructive,
    }
}

/// `|±_α⟩`, read after `RotZ(−α)·H`.
fn m_alpha() -> Observable {
    observable("M", 1, vec![Gate::Hadamard(Q1)], true, true)
}

fn pauli_corrections() -> Vec<CorrectionKind> {
    vec![
        CorrectionKind {
            name: "Z".into(),
            circuit: Local::new(1, vec![Gate::RotZ(Q1, Angle::PI)]),
            diagonalizer: Some(Local::new(1, vec![])),
        },
        CorrectionKind {
            name: "X".into(),
            circuit: Local::new(
                1,
                vec![
                    Gate::Hadamard(Q1),
                    Gate::RotZ(Q1, Angle::PI),
                    Gate::Hadamard(Q1),
                ],
            ),
            diagonalizer: Some(Local::new(1, vec![Gate::Hadamard(Q1)])),
        },
    ]
}

fn oneway() -> Scheme {
    Scheme {
        name: "oneway".into(),
        inits: vec![plus()],
        unitaries: vec![unitary("CZ", 2, vec![Gate::ControlledZ(Q1, Q2)])],
        measurements: vec![m_alpha()],
        corrections: pauli_corrections(),
    }
}

/// No preparations and no unitaries; `(X−Y)/√2` has eigenvectors
/// `|0⟩ ± e^{−iπ/4}|1⟩` and consumes its qubit.
fn transfer() -> Scheme {
    Scheme {
        name: "transfer".into(),
        inits: vec![],
        unitaries: vec![],
        measurements: vec![
            observable("XZ", 2, vec![Gate::Hadamard(Q1)], false, false),
            observable("Z", 1, vec![], false, false),
            observable(
                "XY",
                1,
                vec![Gate::RotZ(Q1, Angle::pi_fraction(1, 4)), Gate::Hadamard(Q1)],
                false,
                true,
            ),
        ],
        corrections: pauli_corrections(),
    }
}

fn circuit() -> Scheme {
    Scheme {
        name: "circuit".into(),
        inits: vec![Preparation {
            name: "zero".into(),
            circuit: Local::new(1, vec![]),
        }],
        unitaries: vec![
            unitary("H", 1, vec![Gate::Hadamard(Q1)]),
            unitary("T", 1, vec![Gate::RotZ(Q1, Angle::pi_fraction(1, 4))]),
            unitary("CZ", 2, vec![Gate::ControlledZ(Q1, Q2)]),
        ],
        measurements: vec![observable("Z", 1, vec![], false, true)],
        corrections: vec![],
    }
}

fn ancilla() -> Scheme {
    Scheme {
        name: "ancilla".into(),
        inits: vec![plus()],
        unitaries: vec![unitary(
            "HHCZ",
            2,
            vec![
                Gate::ControlledZ(Q1, Q2),
                Gate::Hadamard(Q1),
                Gate::Hadamard(Q2),
            ],
        )],
        measurements: vec![m_alpha()],
        corrections: pauli_corrections(),
    }
}

pub fn builtin_schemes() -> Vec<Scheme> {
    vec![oneway(), transfer(), circuit(), ancilla()]
}

pub fn builtin_scheme(name: &str) -> Option<Scheme> {
    builtin_schemes().into_iter().find(|s| s.name == name)
}

/// System qubit 1, ancilla 2 in `|+⟩`: `(H⊗H)·ΛZ`, then the ancilla is
/// read at angle 0 and `X_1^{s_2}` leaves `H|ψ⟩` on the system.
pub fn ancilla_hadamard() -> SchemePattern {
    SchemePattern::new(
        [Q1, Q2],
        vec![Q1],
        vec![Q1],
        vec![
            SchemeCommand::Unitary {
                kind: "HHCZ".into(),
                qubits: vec![Q1, Q2],
            },
            SchemeCommand::Measure {
                kind: "M".into(),
                qubits: vec![Q2],
                angle: Angle::ZERO,
                outcome: Q2,
            },
            SchemeCommand::Correct {
                kind: "X".into(),
                qubit: Q1,
                signal: Signal::of([Q2]),
            },
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use num_complex::Complex64 as C64;

    fn names<T>(v: &[T], f: impl Fn(&T) -> &str) -> Vec<String> {
        v.iter().map(|k| f(k).to_string()).collect()
    }

    #[test]
    fn catalog_is_valid_and_named() {
        let all = builtin_schemes();
        assert_eq!(names(&all, |s| &s.name), SCHEME_NAMES.to_vec());
        for s in &all {
            s.validate().unwrap();
        }
    }

    #[test]
    fn correction_sets() {
        let one = oneway();
        assert_eq!(names(&one.corrections, |k| &k.name), ["Z", "X"]);
        assert!(one.corrections[0]
            .diagonalizer
            .as_ref()
            .unwrap()
            .gates
            .is_empty());
        assert_eq!(
            one.corrections[1].diagonalizer.as_ref().unwrap().gates,
            vec![Gate::Hadamard(Q1)]
        );
        assert!(circuit().corrections.is_empty());
    }

    #[test]
    fn diagonalizers_diagonalize() {
        for s in builtin_schemes() {
            for k in &s.corrections {
                let d = k.diagonalizer.as_ref().unwrap().matrix();
                let m = &d * k.circuit.matrix() * d.adjoint();
                assert!(
                    m[(0, 1)].norm() < 1e-10 && m[(1, 0)].norm() < 1e-10,
                    "{} {}",
                    s.name,
                    k.name
                );
            }
        }
    }

    #[test]
    fn ancilla_entangler_is_hh_times_cz() {
        let u = ancilla().unitaries[0].circuit.matrix();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let h1 = DMatrix::from_row_slice(2, 2, &[h, h, h, -h]).map(|x| C64::new(x, 0.0));
        let hh = h1.kronecker(&h1);
        let mut cz = DMatrix::<C64>::identity(4, 4);
        cz[(3, 3)] = C64::new(-1.0, 0.0);
        let want = hh * cz;
        assert!((u - want).iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn xy_observable_eigenvector() {
        // (X−Y)/√2 |v⟩ = |v⟩ for |v⟩ = (|0⟩ + e^{−iπ/4}|1⟩)/√2, read as outcome 0
        let b = transfer().measurements[2].basis.matrix();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [
            C64::new(h, 0.0),
            C64::from_polar(h, -std::f64::consts::FRAC_PI_4),
        ];
        let out0 = b[(0, 0)] * v[0] + b[(0, 1)] * v[1];
        assert!((out0.norm() - 1.0).abs() < 1e-12);
    }
}
