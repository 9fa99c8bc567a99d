//! Reordering of commands that keeps the number of simultaneously live
//! qubits small. Only commuting commands are swapped, so every order it
//! produces has the same semantics as the original.

use std::collections::{HashMap, HashSet};

use crate::pattern::{Command, Pattern, QubitId};

fn diagonal(c: &Command) -> bool {
    matches!(c, Command::Entangle(..) | Command::CorrectZ { .. })
}

fn predecessors(t: &Pattern) -> Vec<Vec<usize>> {
    let mut on_qubit: HashMap<QubitId, Vec<usize>> = HashMap::new();
    let mut measured_by: HashMap<QubitId, usize> = HashMap::new();
    let mut preds = Vec::with_capacity(t.commands.len());
    for (j, c) in t.commands.iter().enumerate() {
        let mut p: Vec<usize> = Vec::new();
        for q in c.acted() {
            let list = on_qubit.entry(q).or_default();
            for &i in list.iter() {
                if !(diagonal(c) && diagonal(&t.commands[i])) {
                    p.push(i);
                }
            }
            list.push(j);
        }
        for s in c.signals() {
            for q in s.outcomes() {
                if let Some(&i) = measured_by.get(q) {
                    p.push(i);
                }
            }
        }
        if let Command::Measure { qubit, .. } = c {
            measured_by.insert(*qubit, j);
        }
        p.sort_unstable();
        p.dedup();
        preds.push(p);
    }
    preds
}

/// Greedy order: always run the ready command that adds the fewest live
/// qubits, preferring measurements and then original position.
pub fn low_width_order(t: &Pattern) -> Vec<usize> {
    let n = t.commands.len();
    let preds = predecessors(t);
    let mut succs = vec![Vec::new(); n];
    let mut missing: Vec<usize> = preds.iter().map(Vec::len).collect();
    for (j, p) in preds.iter().enumerate() {
        for &i in p {
            succs[i].push(j);
        }
    }
    let mut live: HashSet<QubitId> = t.inputs.iter().copied().collect();
    let mut ready: Vec<usize> = (0..n).filter(|&j| missing[j] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while !ready.is_empty() {
        let (k, _) = ready
            .iter()
            .enumerate()
            .map(|(k, &j)| {
                let c = &t.commands[j];
                let new = c.acted().iter().filter(|q| !live.contains(q)).count() as i64;
                let freed = i64::from(matches!(c, Command::Measure { .. }));
                (k, (new - freed, j))
            })
            .min_by_key(|&(_, key)| key)
            .expect("ready is non-empty");
        let j = ready.swap_remove(k);
        let c = &t.commands[j];
        for q in c.acted() {
            live.insert(q);
        }
        if let Command::Measure { qubit, .. } = c {
            live.remove(qubit);
        }
        order.push(j);
        for &s in &succs[j] {
            missing[s] -= 1;
            if missing[s] == 0 {
                ready.push(s);
            }
        }
    }
    order
}

/// The pattern with its commands in [`low_width_order`].
pub(crate) fn scheduled(t: &Pattern) -> Pattern {
    let order = low_width_order(t);
    Pattern {
        commands: order.into_iter().map(|j| t.commands[j].clone()).collect(),
        ..t.clone()
    }
}
