//! Constant-depth application of commuting parity-controlled Pauli
//! corrections with fan-out gates.
//!
//! Every qubit used `m` times across a batch is copied onto `m − 1` fresh
//! ancillas by one fan-out, all phase gates then run on distinct copies in a
//! single layer, and a second fan-out returns the ancillas to `|0⟩`.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::angle::Angle;
use crate::circuit::{inverse_gates, Gate};
use crate::error::{Error, Result};
use crate::pattern::{QubitId, Signal};

/// Basis change `T` on a target such that `T·C·T† = Z` for the correction `C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BasisChange {
    /// `C = Z`.
    Identity,
    /// `C = X`.
    Hadamard,
    /// Gates acting on the target only.
    Custom(Vec<Gate>),
}

impl BasisChange {
    fn gates(&self, target: QubitId) -> Vec<Gate> {
        match self {
            BasisChange::Identity => vec![],
            BasisChange::Hadamard => vec![Gate::Hadamard(target)],
            BasisChange::Custom(g) => g.clone(),
        }
    }

    fn is_identity(&self) -> bool {
        match self {
            BasisChange::Identity => true,
            BasisChange::Custom(g) => g.is_empty(),
            BasisChange::Hadamard => false,
        }
    }
}

/// `C_target^{controls}`: the correction applies iff the parity of the
/// control qubits (in the computational basis) XOR the constant is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchItem {
    pub controls: Signal,
    pub target: QubitId,
    pub basis: BasisChange,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DiagonalBatch {
    pub items: Vec<BatchItem>,
}

/// Hands out fresh qubit ids.
#[derive(Debug, Clone)]
pub struct QubitAllocator {
    next: u32,
}

impl QubitAllocator {
    /// Ids strictly greater than `max_used`.
    pub fn above(max_used: u32) -> Self {
        QubitAllocator { next: max_used + 1 }
    }

    pub fn fresh(&mut self) -> QubitId {
        let q = QubitId(self.next);
        self.next += 1;
        q
    }

    pub fn peek(&self) -> u32 {
        self.next
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Fragment {
    pub gates: Vec<Gate>,
    /// Fresh qubits, `|0⟩` on entry and on exit.
    pub ancillas: Vec<QubitId>,
}

impl DiagonalBatch {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::InvalidBatch(m));
        let mut targets = HashSet::new();
        for it in &self.items {
            if !targets.insert(it.target) {
                return err(format!("target {} appears in two items", it.target));
            }
            if it.controls.contains(it.target) {
                return err(format!("target {} controls itself", it.target));
            }
            if let BasisChange::Custom(gs) = &it.basis {
                if gs.iter().flat_map(Gate::qubits).any(|q| q != it.target) {
                    return err(format!("basis change of {} leaves its target", it.target));
                }
            }
        }
        for it in &self.items {
            if it.basis.is_identity() {
                continue;
            }
            if self.items.iter().any(|o| o.controls.contains(it.target)) {
                return err(format!(
                    "non-diagonal correction on {} does not commute with its use as a control",
                    it.target
                ));
            }
        }
        Ok(())
    }
}

pub fn parallelize_commuting_diagonal(
    batch: &DiagonalBatch,
    alloc: &mut QubitAllocator,
) -> Result<Fragment> {
    batch.validate()?;
    let items: Vec<&BatchItem> = batch
        .items
        .iter()
        .filter(|it| !it.controls.is_trivial())
        .collect();

    let mut uses: BTreeMap<QubitId, usize> = BTreeMap::new();
    for it in &items {
        for &c in it.controls.outcomes() {
            *uses.entry(c).or_default() += 1;
        }
        let n = it.controls.width() + usize::from(it.controls.constant());
        *uses.entry(it.target).or_default() += n;
    }
    let mut copies: BTreeMap<QubitId, Vec<QubitId>> = BTreeMap::new();
    let mut ancillas = Vec::new();
    for (&q, &m) in &uses {
        let mut v = vec![q];
        for _ in 1..m {
            let a = alloc.fresh();
            ancillas.push(a);
            v.push(a);
        }
        copies.insert(q, v);
    }
    let fanouts: Vec<Gate> = copies
        .iter()
        .filter(|(_, v)| v.len() > 1)
        .map(|(&q, v)| Gate::FanOut {
            control: q,
            targets: v[1..].to_vec(),
        })
        .collect();

    let mut cursor: BTreeMap<QubitId, usize> = BTreeMap::new();
    let mut take = |q: QubitId| {
        let i = cursor.entry(q).or_default();
        let c = copies[&q][*i];
        *i += 1;
        c
    };
    let mut phase = Vec::new();
    for it in &items {
        for &c in it.controls.outcomes() {
            let cc = take(c);
            let tc = take(it.target);
            phase.push(Gate::ControlledZ(cc, tc));
        }
        if it.controls.constant() {
            phase.push(Gate::RotZ(take(it.target), Angle::PI));
        }
    }

    let mut gates = Vec::new();
    for it in &items {
        gates.extend(it.basis.gates(it.target));
    }
    gates.extend(fanouts.iter().cloned());
    gates.extend(phase);
    gates.extend(fanouts);
    for it in &items {
        gates.extend(inverse_gates(&it.basis.gates(it.target)));
    }
    Ok(Fragment { gates, ancillas })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layering::Layering;

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn depth(gates: &[Gate]) -> usize {
        Layering::from_domains(gates.iter().map(Gate::qubits)).depth()
    }

    fn z_item(controls: &[u32], target: u32) -> BatchItem {
        BatchItem {
            controls: Signal::of(controls.iter().map(|&c| q(c))),
            target: q(target),
            basis: BasisChange::Identity,
        }
    }

    #[test]
    fn disjoint_items_need_no_fanout() {
        let batch = DiagonalBatch {
            items: vec![z_item(&[1], 2), z_item(&[3], 4), z_item(&[5], 6)],
        };
        let f = parallelize_commuting_diagonal(&batch, &mut QubitAllocator::above(6)).unwrap();
        assert!(f.ancillas.is_empty());
        assert!(depth(&f.gates) <= 3);
        assert_eq!(depth(&f.gates), 1);
    }

    #[test]
    fn shared_control_is_copied() {
        let batch = DiagonalBatch {
            items: vec![z_item(&[1], 2), z_item(&[1], 3), z_item(&[1], 4)],
        };
        let f = parallelize_commuting_diagonal(&batch, &mut QubitAllocator::above(4)).unwrap();
        assert_eq!(f.ancillas, vec![q(5), q(6)]);
        assert_eq!(depth(&f.gates), 3);
    }

    #[test]
    fn hadamard_basis_bounds_depth_by_five() {
        let mut items: Vec<BatchItem> = (0..8)
            .map(|i| BatchItem {
                controls: Signal::of([q(1), q(2), q(3)]).with_constant(i % 2 == 0),
                target: q(10 + i),
                basis: BasisChange::Hadamard,
            })
            .collect();
        items.push(z_item(&[1, 2], 30));
        let f = parallelize_commuting_diagonal(
            &DiagonalBatch { items },
            &mut QubitAllocator::above(30),
        )
        .unwrap();
        assert!(depth(&f.gates) <= 5);
    }

    #[test]
    fn overlapping_targets_rejected() {
        let batch = DiagonalBatch {
            items: vec![z_item(&[1], 2), z_item(&[3], 2)],
        };
        assert!(matches!(
            parallelize_commuting_diagonal(&batch, &mut QubitAllocator::above(3)),
            Err(Error::InvalidBatch(_))
        ));
    }

    #[test]
    fn non_commuting_items_rejected() {
        let batch = DiagonalBatch {
            items: vec![
                BatchItem {
                    controls: Signal::of([q(1)]),
                    target: q(2),
                    basis: BasisChange::Hadamard,
                },
                z_item(&[2], 3),
            ],
        };
        assert!(batch.validate().is_err());
    }
}
