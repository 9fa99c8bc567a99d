use super::{Metrics, TranslationReport};
use crate::circuit::{expand_fanout, Circuit, Gate};
use crate::diagonal::{
    parallelize_commuting_diagonal, BasisChange, BatchItem, DiagonalBatch, QubitAllocator,
};
use crate::error::{Error, Result};
use crate::pattern::{Command, Pattern};

/// Layer by layer: `E → ΛZ`, `M^α → RotZ(−α)·H` with the line left for the
/// final standard-basis measurement, and each layer's Z- and X-corrections
/// as one parallelized batch controlled by the measured lines.
pub fn pattern_to_fanout_circuit(t: &Pattern) -> Result<(Circuit, TranslationReport)> {
    let layering = t.layers()?;
    if t.has_dependent_measurements() {
        return Err(Error::DependentMeasurement);
    }
    let mut alloc = QubitAllocator::above(t.max_id());
    let mut ancillas = Vec::new();
    let mut gates: Vec<Gate> = t
        .register
        .iter()
        .filter(|q| !t.inputs.contains(q))
        .map(|&q| Gate::Hadamard(q))
        .collect();
    for layer in &layering.layers {
        let cmds: Vec<&Command> = layer.iter().map(|&i| &t.commands[i]).collect();
        for c in &cmds {
            if let Command::Entangle(a, b) = c {
                gates.push(Gate::ControlledZ(*a, *b));
            }
        }
        for c in &cmds {
            if let Command::Measure { qubit, angle, .. } = c {
                if !angle.is_zero() {
                    gates.push(Gate::RotZ(*qubit, -*angle));
                }
                gates.push(Gate::Hadamard(*qubit));
            }
        }
        let batch = |basis: BasisChange, want_x: bool| DiagonalBatch {
            items: cmds
                .iter()
                .filter_map(|c| match c {
                    Command::CorrectZ { qubit, signal } if !want_x => Some((qubit, signal)),
                    Command::CorrectX { qubit, signal } if want_x => Some((qubit, signal)),
                    _ => None,
                })
                .map(|(q, s)| BatchItem {
                    controls: s.clone(),
                    target: *q,
                    basis: basis.clone(),
                })
                .collect(),
        };
        for b in [
            batch(BasisChange::Identity, false),
            batch(BasisChange::Hadamard, true),
        ] {
            if b.items.is_empty() {
                continue;
            }
            let f = parallelize_commuting_diagonal(&b, &mut alloc)?;
            gates.extend(f.gates);
            ancillas.extend(f.ancillas);
        }
    }
    let c = Circuit::new(
        t.register.iter().copied().chain(ancillas),
        t.inputs.clone(),
        t.outputs.clone(),
        gates,
    );
    let report = report(t, &c);
    Ok((c, report))
}

/// [`pattern_to_fanout_circuit`] followed by [`expand_fanout`].
pub fn pattern_to_strict_circuit(t: &Pattern) -> Result<(Circuit, TranslationReport)> {
    let (c, _) = pattern_to_fanout_circuit(t)?;
    let c = expand_fanout(&c);
    let report = report(t, &c);
    Ok((c, report))
}

fn report(t: &Pattern, c: &Circuit) -> TranslationReport {
    TranslationReport::new(
        Metrics {
            size: t.size(),
            depth: t.depth(),
        },
        Metrics {
            size: c.size(),
            depth: c.depth(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::{Alpha0, Angle};
    use crate::pattern::{QubitId, Signal};
    use crate::simulate::{channels_equal, circuit_channel, pattern_channel};
    use crate::transpile::{cz_gadget, hadamard_gadget};

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn agree(t: &Pattern, c: &Circuit) {
        let a = pattern_channel(t).unwrap();
        let b = circuit_channel(c, Alpha0::default()).unwrap();
        let cmp = channels_equal(&a, &b, 1e-9).unwrap();
        assert!(cmp.equal, "distance {}", cmp.distance);
    }

    #[test]
    fn hadamard_gadget_becomes_two_line_circuit() {
        let t = hadamard_gadget();
        let (c, _) = pattern_to_fanout_circuit(&t).unwrap();
        assert_eq!(c.register.len(), 2);
        agree(&t, &c);
    }

    #[test]
    fn identity_pattern_has_no_gates() {
        let (c, r) = pattern_to_fanout_circuit(&Pattern::identity(&[q(1), q(2)])).unwrap();
        assert!(c.gates.is_empty());
        assert_eq!(r.output.depth, 0);
    }

    #[test]
    fn cz_gadget_strict_is_one_gate() {
        let (c, _) = pattern_to_strict_circuit(&cz_gadget()).unwrap();
        assert_eq!(c.gates, vec![Gate::ControlledZ(q(1), q(2))]);
    }

    #[test]
    fn shared_outcome_reads_use_fanout() {
        let t = Pattern::new(
            [q(1), q(2), q(3)],
            vec![q(1)],
            vec![q(2), q(3)],
            vec![
                Command::Entangle(q(1), q(2)),
                Command::Entangle(q(1), q(3)),
                Command::measure(q(1), Angle::pi_fraction(1, 4)),
                Command::x(q(2), Signal::of([q(1)])),
                Command::z(q(3), Signal::of([q(1)]).with_constant(true)),
            ],
        );
        let (c, _) = pattern_to_fanout_circuit(&t).unwrap();
        agree(&t, &c);
        let (s, _) = pattern_to_strict_circuit(&t).unwrap();
        assert!(!s.has_fanout());
        agree(&t, &s);
    }

    #[test]
    fn dependent_measurements_are_refused() {
        let t = Pattern::new(
            [q(1), q(2)],
            vec![q(1)],
            vec![],
            vec![
                Command::measure(q(1), Angle::ZERO),
                Command::Measure {
                    qubit: q(2),
                    angle: Angle::ZERO,
                    s_domain: Signal::of([q(1)]),
                    t_domain: Signal::empty(),
                },
            ],
        );
        assert!(matches!(
            pattern_to_fanout_circuit(&t),
            Err(Error::DependentMeasurement)
        ));
    }
}
