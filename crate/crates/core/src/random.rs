//! Seeded generators for circuits, patterns and scheme patterns.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::angle::Angle;
use crate::circuit::{Circuit, Gate};
use crate::pattern::{Command, Pattern, QubitId, Signal};
use crate::schemes::{Scheme, SchemeCommand, SchemePattern};

fn ids(n: usize) -> Vec<QubitId> {
    (1..=n as u32).map(QubitId).collect()
}

/// Multiple of `π/8`, sometimes zero.
pub fn random_angle(rng: &mut impl Rng) -> Angle {
    Angle::pi_fraction(rng.gen_range(-7..=8), 8)
}

/// Unitary-form circuit over `{H, RotZ, ΛZ}` built from `depth` rounds of
/// disjoint gates, so its depth is at most `depth`.
pub fn random_circuit(rng: &mut impl Rng, n: usize, depth: usize) -> Circuit {
    let qs = ids(n);
    let mut gates = Vec::new();
    for _ in 0..depth {
        let mut free = qs.clone();
        free.shuffle(rng);
        let mut layer = Vec::new();
        while let Some(a) = free.pop() {
            match rng.gen_range(0..4) {
                0 if !free.is_empty() => layer.push(Gate::ControlledZ(a, free.pop().unwrap())),
                0 | 1 => layer.push(Gate::Hadamard(a)),
                2 => layer.push(Gate::RotZ(a, random_angle(rng))),
                _ => {}
            }
        }
        if layer.is_empty() && !qs.is_empty() {
            layer.push(Gate::Hadamard(qs[rng.gen_range(0..n)]));
        }
        gates.extend(layer);
    }
    Circuit::on(&qs, gates)
}

/// Like [`random_circuit`] but with occasional fan-out gates.
pub fn random_fanout_circuit(rng: &mut impl Rng, n: usize, depth: usize) -> Circuit {
    let mut c = random_circuit(rng, n, depth);
    if n >= 2 {
        for _ in 0..rng.gen_range(1..=2) {
            let mut qs = ids(n);
            qs.shuffle(rng);
            let k = rng.gen_range(1..n);
            let at = rng.gen_range(0..=c.gates.len());
            c.gates.insert(
                at,
                Gate::FanOut {
                    control: qs[0],
                    targets: qs[1..=k].to_vec(),
                },
            );
        }
    }
    c
}

fn random_signal(rng: &mut impl Rng, measured: &[QubitId], nonempty: bool) -> Signal {
    let mut s = Signal::empty();
    if measured.is_empty() {
        return s;
    }
    for &q in measured {
        if rng.gen_bool(0.3) {
            s.toggle(q);
        }
    }
    if nonempty && s.outcomes().is_empty() {
        s.toggle(*measured.choose(rng).unwrap());
    }
    if rng.gen_bool(0.1) {
        s = s.with_constant(true);
    }
    s
}

fn subset(rng: &mut impl Rng, qs: &[QubitId]) -> Vec<QubitId> {
    let k = rng.gen_range(1..=qs.len());
    let mut v: Vec<QubitId> = qs.choose_multiple(rng, k).copied().collect();
    v.sort();
    v
}

/// Well-formed pattern on `n` qubits with about `len` commands before the
/// closing measurements. Inputs and outputs are random non-empty subsets.
pub fn random_pattern(rng: &mut impl Rng, n: usize, len: usize) -> Pattern {
    let qs = ids(n.max(1));
    let inputs = subset(rng, &qs);
    let outputs = subset(rng, &qs);
    let mut alive = qs.clone();
    let mut measured: Vec<QubitId> = Vec::new();
    let mut cmds = Vec::new();
    for _ in 0..len {
        let measurable: Vec<QubitId> = alive
            .iter()
            .copied()
            .filter(|q| !outputs.contains(q))
            .collect();
        match rng.gen_range(0..5) {
            0 | 1 if alive.len() >= 2 => {
                let pair: Vec<_> = alive.choose_multiple(rng, 2).copied().collect();
                cmds.push(Command::Entangle(pair[0], pair[1]));
            }
            2 if !measurable.is_empty() => {
                let q = *measurable.choose(rng).unwrap();
                cmds.push(Command::Measure {
                    qubit: q,
                    angle: random_angle(rng),
                    s_domain: random_signal(rng, &measured, false),
                    t_domain: random_signal(rng, &measured, false),
                });
                alive.retain(|&x| x != q);
                measured.push(q);
            }
            3 | 4 if !measured.is_empty() && !alive.is_empty() => {
                let q = *alive.choose(rng).unwrap();
                let s = random_signal(rng, &measured, true);
                cmds.push(if rng.gen_bool(0.5) {
                    Command::x(q, s)
                } else {
                    Command::z(q, s)
                });
            }
            _ => {}
        }
    }
    for q in alive {
        if !outputs.contains(&q) {
            cmds.push(Command::measure(q, random_angle(rng)));
        }
    }
    Pattern::new(qs, inputs, outputs, cmds)
}

/// Executable pattern of `s` on `n` register qubits with `len` commands.
/// Schemes without preparations get every qubit as input.
pub fn random_scheme_pattern(
    rng: &mut impl Rng,
    s: &Scheme,
    n: usize,
    len: usize,
) -> SchemePattern {
    let qs = ids(n.max(2));
    let mut inputs: Vec<QubitId> = if s.inits.is_empty() {
        qs.clone()
    } else {
        qs.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
    };
    if inputs.is_empty() {
        inputs.push(qs[0]);
    }
    let outputs = vec![*qs.choose(rng).unwrap()];
    let mut alive = qs.clone();
    let mut outcomes: Vec<QubitId> = Vec::new();
    let mut next_label = qs.len() as u32 + 1;
    let mut cmds = Vec::new();
    let mut tries = 0;
    while cmds.len() < len && tries < 20 * len {
        tries += 1;
        match rng.gen_range(0..3) {
            0 if !s.unitaries.is_empty() => {
                let k = s.unitaries.choose(rng).unwrap();
                if alive.len() < k.circuit.arity {
                    continue;
                }
                let qubits: Vec<_> = alive
                    .choose_multiple(rng, k.circuit.arity)
                    .copied()
                    .collect();
                cmds.push(SchemeCommand::Unitary {
                    kind: k.name.clone(),
                    qubits,
                });
            }
            1 if !s.measurements.is_empty() => {
                let k = s.measurements.choose(rng).unwrap();
                let pool: Vec<QubitId> = if k.destructive {
                    alive
                        .iter()
                        .copied()
                        .filter(|q| !outputs.contains(q))
                        .collect()
                } else {
                    alive.clone()
                };
                if pool.len() < k.basis.arity {
                    continue;
                }
                let qubits: Vec<_> = pool.choose_multiple(rng, k.basis.arity).copied().collect();
                let outcome = if k.destructive {
                    alive.retain(|q| !qubits.contains(q));
                    qubits[0]
                } else {
                    next_label += 1;
                    QubitId(next_label - 1)
                };
                let angle = if k.parametric {
                    random_angle(rng)
                } else {
                    Angle::ZERO
                };
                cmds.push(SchemeCommand::Measure {
                    kind: k.name.clone(),
                    qubits,
                    angle,
                    outcome,
                });
                outcomes.push(outcome);
            }
            2 if !s.corrections.is_empty() && !outcomes.is_empty() => {
                let k = s.corrections.choose(rng).unwrap();
                cmds.push(SchemeCommand::Correct {
                    kind: k.name.clone(),
                    qubit: *alive.choose(rng).unwrap(),
                    signal: random_signal(rng, &outcomes, true),
                });
            }
            _ => {}
        }
    }
    SchemePattern::new(qs, inputs, outputs, cmds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::builtin_schemes;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_are_valid_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let c = random_circuit(&mut rng, 3, 5);
            c.validate().unwrap();
            assert!(c.depth() <= 5 && c.depth() >= 1);
            random_fanout_circuit(&mut rng, 3, 3).validate().unwrap();
            let t = random_pattern(&mut rng, 4, 12);
            assert!(t.is_well_formed(), "{:?}", t.validate());
            for s in builtin_schemes() {
                random_scheme_pattern(&mut rng, &s, 3, 6)
                    .validate(&s)
                    .unwrap();
            }
        }
        let a = random_pattern(&mut ChaCha8Rng::seed_from_u64(1), 4, 10);
        let b = random_pattern(&mut ChaCha8Rng::seed_from_u64(1), 4, 10);
        assert_eq!(a, b);
    }
}
