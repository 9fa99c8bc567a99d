//! Pauli flattening.
//!
//! Corrections are carried as a Pauli frame while entangling commands are
//! hoisted to the front (`E_ab X_a = X_a Z_b E_ab`). A measurement at a
//! multiple of π/2 absorbs its frame and its own σ/τ into a flip signal and
//! becomes plain; later reads of its outcome see `s_q ⊕ flip`. Other
//! measurements get their pending frame back as explicit corrections and
//! keep their domains. Remaining frames end up on the outputs.

use std::collections::{BTreeMap, HashMap};

use crate::pattern::{Command, Pattern, QubitId, Signal};

/// Flip of the outcome of `M^α` when `X^σ Z^τ` precede it, for `α = k·π/2`.
///
/// `(−1)^σ·α + τπ` equals `α + π` exactly when `τ ⊕ σ·[k odd]` is 1.
pub fn flip_signal(quarter_turns: u8, sigma: &Signal, tau: &Signal) -> Signal {
    if quarter_turns.is_multiple_of(2) {
        tau.clone()
    } else {
        sigma.xor(tau)
    }
}

#[derive(Default)]
struct Frame {
    x: HashMap<QubitId, Signal>,
    z: HashMap<QubitId, Signal>,
}

impl Frame {
    fn get(map: &HashMap<QubitId, Signal>, q: QubitId) -> Signal {
        map.get(&q).cloned().unwrap_or_default()
    }

    fn add(map: &mut HashMap<QubitId, Signal>, q: QubitId, s: &Signal) {
        if !s.is_trivial() {
            map.entry(q).or_default().xor_assign(s);
        }
    }

    fn take(&mut self, q: QubitId) -> (Signal, Signal) {
        (
            self.x.remove(&q).unwrap_or_default(),
            self.z.remove(&q).unwrap_or_default(),
        )
    }
}

/// Greedy edge colouring in command order; classes are emitted in colour
/// order so each class is one layer.
fn coloured(edges: Vec<(QubitId, QubitId)>) -> Vec<Command> {
    let mut used: HashMap<QubitId, Vec<usize>> = HashMap::new();
    let mut classes: BTreeMap<usize, Vec<Command>> = BTreeMap::new();
    for (a, b) in edges {
        let ua = used.get(&a).cloned().unwrap_or_default();
        let ub = used.get(&b).cloned().unwrap_or_default();
        let c = (0..).find(|c| !ua.contains(c) && !ub.contains(c)).unwrap();
        used.entry(a).or_default().push(c);
        used.entry(b).or_default().push(c);
        classes.entry(c).or_default().push(Command::Entangle(a, b));
    }
    classes.into_values().flatten().collect()
}

pub fn pauli_flatten(t: &Pattern) -> Pattern {
    let mut frame = Frame::default();
    let mut subst: HashMap<QubitId, Signal> = HashMap::new();
    let mut edges = Vec::new();
    let mut rest = Vec::new();
    for cmd in &t.commands {
        match cmd.substitute_signals(&subst) {
            Command::Entangle(a, b) => {
                let (xa, xb) = (Frame::get(&frame.x, a), Frame::get(&frame.x, b));
                Frame::add(&mut frame.z, b, &xa);
                Frame::add(&mut frame.z, a, &xb);
                edges.push((a, b));
            }
            Command::CorrectX { qubit, signal } => Frame::add(&mut frame.x, qubit, &signal),
            Command::CorrectZ { qubit, signal } => Frame::add(&mut frame.z, qubit, &signal),
            Command::Measure {
                qubit,
                angle,
                s_domain,
                t_domain,
            } => {
                let (fx, fz) = frame.take(qubit);
                match angle.quarter_turns() {
                    Some(k) => {
                        let flip = flip_signal(k, &s_domain.xor(&fx), &t_domain.xor(&fz));
                        rest.push(Command::measure(qubit, angle));
                        if !flip.is_trivial() {
                            let mut reading = flip;
                            reading.toggle(qubit);
                            subst.insert(qubit, reading);
                        }
                    }
                    None => {
                        if !fz.is_trivial() {
                            rest.push(Command::z(qubit, fz));
                        }
                        if !fx.is_trivial() {
                            rest.push(Command::x(qubit, fx));
                        }
                        rest.push(Command::Measure {
                            qubit,
                            angle,
                            s_domain,
                            t_domain,
                        });
                    }
                }
            }
        }
    }
    for &q in &t.outputs {
        let (fx, fz) = frame.take(q);
        if !fz.is_trivial() {
            rest.push(Command::z(q, fz));
        }
        if !fx.is_trivial() {
            rest.push(Command::x(q, fx));
        }
    }
    let mut commands = coloured(edges);
    commands.extend(rest);
    Pattern {
        commands,
        ..t.clone()
    }
    .normalized()
}
