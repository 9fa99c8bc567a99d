use std::collections::{BTreeSet, HashMap};

use super::flatten::pauli_flatten;
use super::gadgets::{gate_gadget, hadamard_gadget};
use super::{Metrics, TranslationReport};
use crate::angle::Angle;
use crate::circuit::{cnot, Circuit, Gate};
use crate::error::{Error, Result};
use crate::pattern::{compose_seq, reorder_disjoint, Command, Pattern, QubitId};

struct Builder {
    register: BTreeSet<QubitId>,
    commands: Vec<Command>,
    next: u32,
    /// Current pattern qubit carrying each circuit line.
    wire: HashMap<QubitId, QubitId>,
}

impl Builder {
    fn fresh(&mut self) -> QubitId {
        let q = QubitId(self.next);
        self.next += 1;
        self.register.insert(q);
        q
    }

    /// Glues `template`'s inputs onto `lines` and moves the lines to its outputs.
    fn splice(&mut self, template: &Pattern, lines: &[QubitId]) {
        debug_assert_eq!(template.inputs.len(), lines.len());
        debug_assert_eq!(template.outputs.len(), lines.len());
        let mut map: HashMap<QubitId, QubitId> = template
            .inputs
            .iter()
            .zip(lines)
            .map(|(&i, l)| (i, self.wire[l]))
            .collect();
        for &q in &template.register {
            if let std::collections::hash_map::Entry::Vacant(v) = map.entry(q) {
                v.insert(self.fresh());
            }
        }
        self.commands
            .extend(template.commands.iter().map(|c| c.map_qubits(&|q| map[&q])));
        for (o, l) in template.outputs.iter().zip(lines) {
            self.wire.insert(*l, map[o]);
        }
    }
}

/// Gadget substitution along the circuit's layering. Ancillas are prepared
/// with `t_H` from `|+⟩`; discarded lines are measured at angle 0.
pub fn circuit_to_pattern(c: &Circuit) -> Result<(Pattern, TranslationReport)> {
    let layering = c.layers()?;
    let mut b = Builder {
        register: c.register.clone(),
        commands: Vec::new(),
        next: c.max_id() + 1,
        wire: c.register.iter().map(|&q| (q, q)).collect(),
    };
    let h = hadamard_gadget();
    for &q in &c.register {
        if !c.inputs.contains(&q) {
            b.splice(&h, &[q]);
        }
    }
    let mut order: Vec<usize> = (0..c.gates.len()).collect();
    order.sort_by_key(|&i| layering.layer_of[i]);
    for i in order {
        match &c.gates[i] {
            Gate::FanOut { control, targets } => {
                let mut lines = targets.clone();
                lines.push(*control);
                b.splice(&fanout_pattern(lines.len())?, &lines);
            }
            g => b.splice(&gate_gadget(g)?, &g.qubits()),
        }
    }
    for &q in &c.register {
        if !c.outputs.contains(&q) {
            let w = b.wire[&q];
            b.commands.push(Command::measure(w, Angle::ZERO));
        }
    }
    let t = Pattern {
        register: b.register,
        inputs: c.inputs.clone(),
        outputs: c.outputs.iter().map(|q| b.wire[q]).collect(),
        commands: b.commands,
    };
    let report = TranslationReport::new(
        Metrics {
            size: c.size(),
            depth: c.depth(),
        },
        Metrics {
            size: t.size(),
            depth: t.depth(),
        },
    );
    Ok((t, report))
}

fn ids(n: usize) -> Vec<QubitId> {
    (1..=n as u32).map(QubitId).collect()
}

/// Writes the parity of qubits `1..=n` onto qubit `n`: the controlled-NOT
/// gadgets `CNOT(i → n)` chained along the target, then flattened.
pub fn parity_pattern(n: usize) -> Result<Pattern> {
    if n == 0 {
        return Err(Error::ZeroArity);
    }
    let q = ids(n);
    let gates: Vec<Gate> = q[..n - 1].iter().flat_map(|&c| cnot(c, q[n - 1])).collect();
    let (t, _) = circuit_to_pattern(&Circuit::on(&q, gates))?;
    reorder_disjoint(&pauli_flatten(&t))
}

/// `t_H^{⊗n} ∘ parity_pattern(n) ∘ t_H^{⊗n}`, flattened: fan-out from the
/// last qubit onto the others.
pub fn fanout_pattern(n: usize) -> Result<Pattern> {
    let par = parity_pattern(n)?;
    if n == 1 {
        return Ok(par);
    }
    let q = ids(n);
    let hs = Circuit::on(&q, q.iter().map(|&x| Gate::Hadamard(x)).collect());
    let (h, _) = circuit_to_pattern(&hs)?;
    let t = compose_seq(&compose_seq(&h, &par)?, &h)?;
    reorder_disjoint(&pauli_flatten(&t))
}
