//! Direct semantics of a scheme pattern: every branch of recorded and
//! unrecorded outcomes gives one Kraus operator.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{Scheme, SchemeCommand, SchemePattern};
use crate::angle::{Alpha0, Angle};
use crate::circuit::{inverse_gates, Gate};
use crate::error::{Error, Result};
use crate::pattern::QubitId;
use crate::simulate::circuit::apply_gate;
use crate::simulate::tensor::Tensor;
use crate::simulate::Channel;

/// Most Kraus operators a scheme channel may collect.
pub const SCHEME_BRANCH_LIMIT: usize = 1 << 16;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const NEGLIGIBLE: f64 = 1e-24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Ref(usize),
    Q(QubitId),
}

struct Walk<'a> {
    p: &'a SchemePattern,
    s: &'a Scheme,
    implicit: Vec<QubitId>,
    alpha0: Alpha0,
    kraus: Vec<DMatrix<C64>>,
}

fn run(t: &mut Tensor<Slot>, gates: &[Gate], alpha0: Alpha0) {
    for g in gates {
        apply_gate(t, g, Slot::Q, alpha0);
    }
}

/// `circuit·|0⟩` for a one-qubit preparation.
fn prepared(gates: &[Gate], alpha0: Alpha0) -> [C64; 2] {
    let mut t: Tensor<Slot> = Tensor::scalar(ONE);
    t.append(Slot::Q(QubitId(1)), [ONE, ZERO]);
    run(&mut t, gates, alpha0);
    [t.amps[0], t.amps[1]]
}

impl Walk<'_> {
    fn ensure(&self, t: &mut Tensor<Slot>, q: QubitId) {
        if t.pos(Slot::Q(q)).is_none() {
            debug_assert!(self.implicit.contains(&q));
            let init = &self.s.inits[0].circuit.gates;
            t.append(Slot::Q(q), prepared(init, self.alpha0));
        }
    }

    fn go(
        &mut self,
        mut t: Tensor<Slot>,
        at: usize,
        bits: &mut HashMap<QubitId, bool>,
    ) -> Result<()> {
        if t.norm_sqr() < NEGLIGIBLE {
            return Ok(());
        }
        let Some(c) = self.p.commands.get(at) else {
            return self.finish(t);
        };
        if !matches!(c, SchemeCommand::Init { .. }) {
            for q in c.acted() {
                self.ensure(&mut t, q);
            }
        }
        match c {
            SchemeCommand::Init { kind, qubit } => {
                let k = self.s.init(kind).expect("validated");
                t.append(Slot::Q(*qubit), prepared(&k.circuit.gates, self.alpha0));
            }
            SchemeCommand::Unitary { kind, qubits } => {
                run(
                    &mut t,
                    &self
                        .s
                        .unitary(kind)
                        .expect("validated")
                        .circuit
                        .placed(qubits),
                    self.alpha0,
                );
            }
            SchemeCommand::Correct {
                kind,
                qubit,
                signal,
            } => {
                if signal.eval(|q| bits.get(&q).copied()).expect("validated") {
                    run(
                        &mut t,
                        &self
                            .s
                            .correction(kind)
                            .expect("validated")
                            .circuit
                            .placed(&[*qubit]),
                        self.alpha0,
                    );
                }
            }
            SchemeCommand::Measure {
                kind,
                qubits,
                angle,
                outcome,
            } => return self.measure(t, at, bits, kind, qubits, *angle, *outcome),
        }
        self.go(t, at + 1, bits)
    }

    #[allow(clippy::too_many_arguments)]
    fn measure(
        &mut self,
        mut t: Tensor<Slot>,
        at: usize,
        bits: &mut HashMap<QubitId, bool>,
        kind: &str,
        qubits: &[QubitId],
        angle: Angle,
        outcome: QubitId,
    ) -> Result<()> {
        let k = self.s.measurement(kind).expect("validated");
        let basis = k.basis_gates(qubits, angle);
        run(&mut t, &basis, self.alpha0);
        for s in [false, true] {
            bits.insert(outcome, s);
            if k.destructive {
                // unrecorded readouts of the consumed qubits, parity fixed
                for z in 0..1usize << qubits.len() {
                    if (z.count_ones() & 1 == 1) != s {
                        continue;
                    }
                    let mut b = t.clone();
                    for (i, q) in qubits.iter().enumerate() {
                        let p = b.pos(Slot::Q(*q)).expect("live");
                        let bra = if z >> i & 1 == 1 {
                            [ZERO, ONE]
                        } else {
                            [ONE, ZERO]
                        };
                        b.contract(p, bra);
                    }
                    self.go(b, at + 1, bits)?;
                }
            } else {
                let mut b = t.clone();
                let mask = qubits
                    .iter()
                    .fold(0usize, |m, q| m | 1 << b.pos(Slot::Q(*q)).expect("live"));
                for (i, a) in b.amps.iter_mut().enumerate() {
                    if ((i & mask).count_ones() & 1 == 1) != s {
                        *a = ZERO;
                    }
                }
                run(&mut b, &inverse_gates(&basis), self.alpha0);
                self.go(b, at + 1, bits)?;
            }
        }
        bits.remove(&outcome);
        Ok(())
    }

    /// Discards live non-outputs, then records one Kraus operator per
    /// readout of them.
    fn finish(&mut self, mut t: Tensor<Slot>) -> Result<()> {
        for &q in &self.p.outputs {
            self.ensure(&mut t, q);
        }
        let discarded: Vec<Slot> = t
            .labels
            .iter()
            .copied()
            .filter(|l| matches!(l, Slot::Q(q) if !self.p.outputs.contains(q)))
            .collect();
        let n_in = self.p.inputs.len();
        let n_out = self.p.outputs.len();
        let order: Vec<Slot> = self
            .p
            .outputs
            .iter()
            .map(|&q| Slot::Q(q))
            .chain((0..n_in).map(Slot::Ref))
            .chain(discarded.iter().copied())
            .collect();
        let v = t.permuted(&order);
        let block = 1usize << (n_out + n_in);
        for chunk in v.amps.chunks(block) {
            if chunk.iter().all(|a| a.norm_sqr() < NEGLIGIBLE) {
                continue;
            }
            if self.kraus.len() >= SCHEME_BRANCH_LIMIT {
                return Err(Error::BranchLimit {
                    count: self.kraus.len() + 1,
                    limit: SCHEME_BRANCH_LIMIT,
                });
            }
            self.kraus
                .push(DMatrix::from_fn(1 << n_out, 1 << n_in, |o, i| {
                    chunk[o + (i << n_out)]
                }));
        }
        Ok(())
    }
}

/// Channel of `p` read directly through the scheme's carried circuits and
/// observable projector pairs.
pub fn scheme_channel(p: &SchemePattern, s: &Scheme) -> Result<Channel> {
    scheme_channel_with(p, s, Alpha0::default())
}

pub fn scheme_channel_with(p: &SchemePattern, s: &Scheme, alpha0: Alpha0) -> Result<Channel> {
    s.validate()?;
    p.validate(s)?;
    let mut t = Tensor::scalar(ONE);
    for (k, &q) in p.inputs.iter().enumerate() {
        t.append_pair(Slot::Ref(k), Slot::Q(q), [ONE, ZERO, ZERO, ONE]);
    }
    let mut w = Walk {
        p,
        s,
        implicit: p.implicit_inits(),
        alpha0,
        kraus: Vec::new(),
    };
    w.go(t, 0, &mut HashMap::new())?;
    Ok(Channel::from_kraus(
        p.inputs.clone(),
        p.outputs.clone(),
        &w.kraus,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;
    use crate::schemes::builtin_scheme;
    use crate::simulate::{channels_equal, pattern_channel};
    use crate::transpile::{hadamard_gadget, rotation_gadget};

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn same(a: &Channel, b: &Channel) {
        let c = channels_equal(a, b, 1e-9).unwrap();
        assert!(c.equal, "distance {}", c.distance);
    }

    #[test]
    fn one_way_agrees_with_pattern_semantics() {
        let s = builtin_scheme("oneway").unwrap();
        let ts: Vec<Pattern> = vec![hadamard_gadget(), rotation_gadget(Angle::pi_fraction(1, 3))];
        for t in ts {
            let ch = scheme_channel(&SchemePattern::from_one_way(&t), &s).unwrap();
            same(&ch, &pattern_channel(&t).unwrap());
            assert!(ch.is_trace_preserving(1e-9));
        }
    }

    #[test]
    fn nondestructive_z_dephases() {
        let s = builtin_scheme("transfer").unwrap();
        let p = SchemePattern::new(
            [q(1)],
            vec![q(1)],
            vec![q(1)],
            vec![SchemeCommand::Measure {
                kind: "Z".into(),
                qubits: vec![q(1)],
                angle: Angle::ZERO,
                outcome: q(5),
            }],
        );
        let ch = scheme_channel(&p, &s).unwrap();
        let mut p0 = DMatrix::from_element(2, 2, ZERO);
        p0[(0, 0)] = ONE;
        let mut p1 = DMatrix::from_element(2, 2, ZERO);
        p1[(1, 1)] = ONE;
        same(&ch, &Channel::from_kraus(vec![q(1)], vec![q(1)], &[p0, p1]));
    }

    #[test]
    fn circuit_scheme_runs_gates() {
        let s = builtin_scheme("circuit").unwrap();
        let p = SchemePattern::new(
            [q(1)],
            vec![q(1)],
            vec![q(1)],
            vec![SchemeCommand::Unitary {
                kind: "H".into(),
                qubits: vec![q(1)],
            }],
        );
        let h = s.unitary("H").unwrap().circuit.matrix();
        same(
            &scheme_channel(&p, &s).unwrap(),
            &Channel::from_operator(vec![q(1)], vec![q(1)], &h),
        );
    }
}
