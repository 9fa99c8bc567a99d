//! Circuits over `{H, Rz(α), ΛZ}` plus the unbounded fan-out gate.
//!
//! Semantics: non-input qubits start in `|0⟩`, gates run in order, and
//! non-output qubits are measured in the standard basis and discarded.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::layering::Layering;
use crate::pattern::QubitId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Gate {
    Hadamard(QubitId),
    /// `diag(1, e^{iα})`.
    RotZ(QubitId, Angle),
    ControlledZ(QubitId, QubitId),
    /// XORs `control` into every target.
    FanOut {
        control: QubitId,
        targets: Vec<QubitId>,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<QubitId> {
        match self {
            Gate::Hadamard(q) | Gate::RotZ(q, _) => vec![*q],
            Gate::ControlledZ(a, b) => vec![*a, *b],
            Gate::FanOut { control, targets } => {
                let mut v = vec![*control];
                v.extend(targets.iter().copied());
                v
            }
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Gate::FanOut { targets, .. } => targets.len() + 1,
            Gate::ControlledZ(..) => 2,
            _ => 1,
        }
    }

    /// All gates in the basis are self-inverse except `Rz`.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::RotZ(q, a) => Gate::RotZ(*q, -*a),
            g => g.clone(),
        }
    }

    pub fn map_qubits(&self, f: &impl Fn(QubitId) -> QubitId) -> Gate {
        match self {
            Gate::Hadamard(q) => Gate::Hadamard(f(*q)),
            Gate::RotZ(q, a) => Gate::RotZ(f(*q), *a),
            Gate::ControlledZ(a, b) => Gate::ControlledZ(f(*a), f(*b)),
            Gate::FanOut { control, targets } => Gate::FanOut {
                control: f(*control),
                targets: targets.iter().map(|&t| f(t)).collect(),
            },
        }
    }

    fn check(&self) -> std::result::Result<(), String> {
        match self {
            Gate::ControlledZ(a, b) if a == b => Err(format!("CZ on a single qubit {a}")),
            Gate::FanOut { control, targets } => {
                let mut seen = HashSet::new();
                for t in targets {
                    if t == control {
                        return Err(format!("fan-out target {t} equals its control"));
                    }
                    if !seen.insert(*t) {
                        return Err(format!("fan-out target {t} repeated"));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

/// Gates of `CNOT(control → target)` in the fixed basis.
pub fn cnot(control: QubitId, target: QubitId) -> [Gate; 3] {
    [
        Gate::Hadamard(target),
        Gate::ControlledZ(control, target),
        Gate::Hadamard(target),
    ]
}

/// The inverse of a gate sequence.
pub fn inverse_gates(gates: &[Gate]) -> Vec<Gate> {
    gates.iter().rev().map(Gate::inverse).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Circuit {
    pub register: BTreeSet<QubitId>,
    pub inputs: Vec<QubitId>,
    pub outputs: Vec<QubitId>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(
        register: impl IntoIterator<Item = QubitId>,
        inputs: Vec<QubitId>,
        outputs: Vec<QubitId>,
        gates: Vec<Gate>,
    ) -> Self {
        Circuit {
            register: register.into_iter().collect(),
            inputs,
            outputs,
            gates,
        }
    }

    /// A circuit with `I = O = V = ids`.
    pub fn on(ids: &[QubitId], gates: Vec<Gate>) -> Self {
        Circuit::new(ids.iter().copied(), ids.to_vec(), ids.to_vec(), gates)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidCircuit(m));
        for (name, list) in [("input", &self.inputs), ("output", &self.outputs)] {
            let mut seen = HashSet::new();
            for q in list {
                if !seen.insert(*q) {
                    return err(format!("{name} {q} listed twice"));
                }
                if !self.register.contains(q) {
                    return err(format!("{name} {q} not in register"));
                }
            }
        }
        for (i, g) in self.gates.iter().enumerate() {
            if let Err(m) = g.check() {
                return err(format!("gate {i}: {m}"));
            }
            for q in g.qubits() {
                if !self.register.contains(&q) {
                    return err(format!("gate {i}: qubit {q} not in register"));
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.gates.iter().map(Gate::size).sum()
    }

    pub fn layering_unchecked(&self) -> Layering {
        Layering::from_domains(self.gates.iter().map(Gate::qubits))
    }

    pub fn layers(&self) -> Result<Layering> {
        self.validate()?;
        Ok(self.layering_unchecked())
    }

    pub fn depth(&self) -> usize {
        self.layering_unchecked().depth()
    }

    pub fn max_id(&self) -> u32 {
        self.register.iter().map(|q| q.0).max().unwrap_or(0)
    }

    pub fn has_fanout(&self) -> bool {
        self.gates.iter().any(|g| matches!(g, Gate::FanOut { .. }))
    }

    pub fn is_unitary_form(&self) -> bool {
        let all: BTreeSet<_> = self.inputs.iter().copied().collect();
        let outs: BTreeSet<_> = self.outputs.iter().copied().collect();
        all == self.register && outs == self.register
    }
}

/// `H^{⊗n} · FanOut(n → 1..n-1) · H^{⊗n}` on qubits `1..=n`: writes the
/// parity of all inputs onto qubit `n`.
pub fn build_parity_via_fanout(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    let ids: Vec<QubitId> = (1..=n as u32).map(QubitId).collect();
    if n == 1 {
        return Ok(Circuit::on(&ids, vec![]));
    }
    let mut gates: Vec<Gate> = ids.iter().map(|&q| Gate::Hadamard(q)).collect();
    gates.push(Gate::FanOut {
        control: ids[n - 1],
        targets: ids[..n - 1].to_vec(),
    });
    gates.extend(ids.iter().map(|&q| Gate::Hadamard(q)));
    Ok(Circuit::on(&ids, gates))
}

/// A single fan-out from qubit `n` onto `1..n`, the convention of
/// `fanout_pattern`.
pub fn build_fanout(n: usize) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    let ids: Vec<QubitId> = (1..=n as u32).map(QubitId).collect();
    let gates = if n == 1 {
        vec![]
    } else {
        vec![Gate::FanOut {
            control: ids[n - 1],
            targets: ids[..n - 1].to_vec(),
        }]
    };
    Ok(Circuit::on(&ids, gates))
}

/// Rounds of a binomial copy tree rooted at `control` over `targets`:
/// round `r` doubles the set of qubits that carry the control value.
pub fn copy_tree_rounds(control: QubitId, targets: &[QubitId]) -> Vec<Vec<(QubitId, QubitId)>> {
    let mut holders = vec![control];
    let mut rest = targets.iter().copied();
    let mut rounds = Vec::new();
    loop {
        let mut round = Vec::new();
        let mut fresh = Vec::new();
        for &h in &holders {
            match rest.next() {
                Some(t) => {
                    round.push((h, t));
                    fresh.push(t);
                }
                None => break,
            }
        }
        if round.is_empty() {
            break;
        }
        holders.extend(fresh);
        rounds.push(round);
    }
    rounds
}

/// CNOT rounds implementing a fan-out on arbitrary target values.
///
/// Before copying, every target whose tree parent is another target absorbs
/// the parent's value (deepest rounds first, so parents are still
/// untouched); the copy tree then cancels it again.
pub fn fanout_cnot_rounds(control: QubitId, targets: &[QubitId]) -> Vec<Vec<(QubitId, QubitId)>> {
    let rounds = copy_tree_rounds(control, targets);
    let mut out: Vec<Vec<(QubitId, QubitId)>> = rounds
        .iter()
        .rev()
        .map(|r| {
            r.iter()
                .copied()
                .filter(|(p, _)| *p != control)
                .collect::<Vec<_>>()
        })
        .filter(|r| !r.is_empty())
        .collect();
    out.extend(rounds);
    out
}

/// Replaces every fan-out by CNOT rounds (each CNOT as `H·ΛZ·H`).
pub fn expand_fanout(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.gates.len());
    for g in &c.gates {
        match g {
            Gate::FanOut { control, targets } => {
                for round in fanout_cnot_rounds(*control, targets) {
                    gates.extend(round.iter().map(|&(_, t)| Gate::Hadamard(t)));
                    gates.extend(round.iter().map(|&(p, t)| Gate::ControlledZ(p, t)));
                    gates.extend(round.iter().map(|&(_, t)| Gate::Hadamard(t)));
                }
            }
            g => gates.push(g.clone()),
        }
    }
    Circuit { gates, ..c.clone() }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: u32) -> Vec<QubitId> {
        (1..=n).map(QubitId).collect()
    }

    #[test]
    fn empty_circuit_metrics() {
        let c = Circuit::on(&ids(2), vec![]);
        assert_eq!(c.size(), 0);
        assert_eq!(c.depth(), 0);
    }

    #[test]
    fn fanout_size_counts_every_qubit() {
        let q = ids(6);
        let c = Circuit::on(
            &q,
            vec![Gate::FanOut {
                control: q[0],
                targets: q[1..].to_vec(),
            }],
        );
        assert_eq!(c.size(), 6);
        assert_eq!(c.depth(), 1);
    }

    #[test]
    fn parity_builder_depth() {
        assert_eq!(build_parity_via_fanout(5).unwrap().depth(), 3);
        assert_eq!(build_parity_via_fanout(1).unwrap().gates.len(), 0);
        assert!(matches!(build_parity_via_fanout(0), Err(Error::ZeroArity)));
    }

    #[test]
    fn invalid_gates_rejected() {
        let q = ids(2);
        let c = Circuit::on(&q, vec![Gate::ControlledZ(q[0], q[0])]);
        assert!(c.validate().is_err());
        let c = Circuit::on(
            &q,
            vec![Gate::FanOut {
                control: q[0],
                targets: vec![q[0]],
            }],
        );
        assert!(c.validate().is_err());
        let c = Circuit::on(&q, vec![Gate::Hadamard(QubitId(9))]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn copy_tree_for_seven_targets_has_three_rounds() {
        let q = ids(8);
        let rounds = copy_tree_rounds(q[0], &q[1..]);
        assert_eq!(rounds.len(), 3);
        assert_eq!(rounds.iter().map(Vec::len).sum::<usize>(), 7);
        // with value-restoring pre-rounds the CNOT depth is 2·3 − 1
        assert_eq!(fanout_cnot_rounds(q[0], &q[1..]).len(), 5);
    }

    #[test]
    fn single_target_fanout_expands_to_one_cnot() {
        let q = ids(2);
        let c = Circuit::on(
            &q,
            vec![Gate::FanOut {
                control: q[0],
                targets: vec![q[1]],
            }],
        );
        assert_eq!(expand_fanout(&c).gates, cnot(q[0], q[1]).to_vec());
    }
}
