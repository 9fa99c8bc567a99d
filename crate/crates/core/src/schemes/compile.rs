//! Layer-by-layer compilation of scheme patterns into fan-out circuits.

use super::{Scheme, SchemeCommand, SchemePattern};
use crate::circuit::{cnot, inverse_gates, Circuit, Gate};
use crate::diagonal::{
    parallelize_commuting_diagonal, BasisChange, BatchItem, DiagonalBatch, QubitAllocator,
};
use crate::error::Result;
use crate::pattern::Pattern;
use crate::transpile::{circuit_to_pattern, Metrics, TranslationReport};

/// Preparations, unitaries and observables are inlined through their
/// carried circuits; each layer's corrections form one parallelized batch
/// using the diagonalizers as basis changes. A destructive observable
/// leaves its parity on the first qubit, a non-destructive one copies it
/// onto a fresh line named by the outcome label.
pub fn scheme_to_fanout_circuit(
    p: &SchemePattern,
    s: &Scheme,
) -> Result<(Circuit, TranslationReport)> {
    s.validate()?;
    p.validate(s)?;
    let mut alloc = QubitAllocator::above(p.max_id());
    let mut lines: Vec<_> = p.register.iter().copied().collect();
    let mut gates: Vec<Gate> = Vec::new();
    if let Some(init) = s.inits.first() {
        for q in p.implicit_inits() {
            gates.extend(init.circuit.placed(&[q]));
        }
    }
    for layer in &p.layering().layers {
        let cmds: Vec<&SchemeCommand> = layer.iter().map(|&i| &p.commands[i]).collect();
        let mut items = Vec::new();
        for c in cmds {
            match c {
                SchemeCommand::Init { kind, qubit } => {
                    gates.extend(s.init(kind).expect("validated").circuit.placed(&[*qubit]));
                }
                SchemeCommand::Unitary { kind, qubits } => {
                    gates.extend(s.unitary(kind).expect("validated").circuit.placed(qubits));
                }
                SchemeCommand::Measure {
                    kind,
                    qubits,
                    angle,
                    outcome,
                } => {
                    let k = s.measurement(kind).expect("validated");
                    let basis = k.basis_gates(qubits, *angle);
                    gates.extend(basis.iter().cloned());
                    if k.destructive {
                        for &q in &qubits[1..] {
                            gates.extend(cnot(q, qubits[0]));
                        }
                    } else {
                        lines.push(*outcome);
                        for &q in qubits {
                            gates.extend(cnot(q, *outcome));
                        }
                        gates.extend(inverse_gates(&basis));
                    }
                }
                SchemeCommand::Correct {
                    kind,
                    qubit,
                    signal,
                } => {
                    let k = s.correction(kind).expect("validated");
                    let d = k.diagonalizer.as_ref().expect("validated");
                    let basis = if d.gates.is_empty() {
                        BasisChange::Identity
                    } else {
                        BasisChange::Custom(d.placed(&[*qubit]))
                    };
                    items.push(BatchItem {
                        controls: signal.clone(),
                        target: *qubit,
                        basis,
                    });
                }
            }
        }
        if !items.is_empty() {
            let f = parallelize_commuting_diagonal(&DiagonalBatch { items }, &mut alloc)?;
            gates.extend(f.gates);
            lines.extend(f.ancillas);
        }
    }
    let c = Circuit::new(lines, p.inputs.clone(), p.outputs.clone(), gates);
    let report = TranslationReport::new(
        metrics(p),
        Metrics {
            size: c.size(),
            depth: c.depth(),
        },
    );
    Ok((c, report))
}

/// [`scheme_to_fanout_circuit`] then [`circuit_to_pattern`].
pub fn scheme_to_pattern(p: &SchemePattern, s: &Scheme) -> Result<(Pattern, TranslationReport)> {
    let (c, _) = scheme_to_fanout_circuit(p, s)?;
    let (t, _) = circuit_to_pattern(&c)?;
    let report = TranslationReport::new(
        metrics(p),
        Metrics {
            size: t.size(),
            depth: t.depth(),
        },
    );
    Ok((t, report))
}

fn metrics(p: &SchemePattern) -> Metrics {
    Metrics {
        size: p.size(),
        depth: p.depth(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{Alpha0, Angle};
    use crate::pattern::{QubitId, Signal};
    use crate::schemes::{ancilla_hadamard, builtin_scheme, scheme_channel};
    use crate::simulate::{channels_equal, circuit_channel, pattern_channel, Channel};
    use crate::transpile::{hadamard_gadget, pattern_to_fanout_circuit};

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn same(a: &Channel, b: &Channel) {
        let c = channels_equal(a, b, 1e-9).unwrap();
        assert!(c.equal, "distance {}", c.distance);
    }

    fn hadamard(out: u32) -> Channel {
        let h = builtin_scheme("circuit")
            .unwrap()
            .unitary("H")
            .unwrap()
            .circuit
            .matrix();
        Channel::from_operator(vec![q(1)], vec![q(out)], &h)
    }

    #[test]
    fn one_way_t_h_compiles_to_hadamard() {
        let s = builtin_scheme("oneway").unwrap();
        let p = SchemePattern::from_one_way(&hadamard_gadget());
        let (c, _) = scheme_to_fanout_circuit(&p, &s).unwrap();
        let ch = circuit_channel(&c, Alpha0::default()).unwrap();
        same(&ch, &hadamard(2));
        let (d, _) = pattern_to_fanout_circuit(&hadamard_gadget()).unwrap();
        same(&ch, &circuit_channel(&d, Alpha0::default()).unwrap());
    }

    #[test]
    fn empty_scheme_pattern_gives_empty_circuit() {
        let s = builtin_scheme("ancilla").unwrap();
        let p = SchemePattern::new([q(1)], vec![q(1)], vec![q(1)], vec![]);
        let (c, r) = scheme_to_fanout_circuit(&p, &s).unwrap();
        assert!(c.gates.is_empty());
        assert_eq!(r.output.depth, 0);
        let (t, _) = scheme_to_pattern(&p, &s).unwrap();
        assert!(t.commands.is_empty());
    }

    #[test]
    fn ancilla_driven_hadamard() {
        let s = builtin_scheme("ancilla").unwrap();
        let p = ancilla_hadamard();
        let direct = scheme_channel(&p, &s).unwrap();
        same(&direct, &hadamard(1));
        let (c, _) = scheme_to_fanout_circuit(&p, &s).unwrap();
        same(&circuit_channel(&c, Alpha0::default()).unwrap(), &direct);
        let (t, _) = scheme_to_pattern(&p, &s).unwrap();
        same(&pattern_channel(&t).unwrap(), &direct);
    }

    #[test]
    fn state_transfer_step_survives_compilation() {
        let s = builtin_scheme("transfer").unwrap();
        let m = |kind: &str, qs: &[u32], outcome: u32| SchemeCommand::Measure {
            kind: kind.into(),
            qubits: qs.iter().map(|&v| q(v)).collect(),
            angle: Angle::ZERO,
            outcome: q(outcome),
        };
        let p = SchemePattern::new(
            [q(1), q(2)],
            vec![q(1), q(2)],
            vec![q(2)],
            vec![
                m("Z", &[2], 10),
                m("XZ", &[2, 1], 11),
                m("XY", &[1], 1),
                SchemeCommand::Correct {
                    kind: "X".into(),
                    qubit: q(2),
                    signal: Signal::of([q(10), q(11)]),
                },
                SchemeCommand::Correct {
                    kind: "Z".into(),
                    qubit: q(2),
                    signal: Signal::of([q(1)]),
                },
            ],
        );
        let direct = scheme_channel(&p, &s).unwrap();
        assert!(direct.is_trace_preserving(1e-9));
        let (c, _) = scheme_to_fanout_circuit(&p, &s).unwrap();
        same(&circuit_channel(&c, Alpha0::default()).unwrap(), &direct);
        let (t, _) = scheme_to_pattern(&p, &s).unwrap();
        same(&pattern_channel(&t).unwrap(), &direct);
    }
}
