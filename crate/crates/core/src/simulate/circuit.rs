use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::channel::Channel;
use super::state::StateVector;
use super::tensor::Tensor;
use super::{mat_h, mat_rz, ONE, ZERO};
use crate::angle::Alpha0;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::pattern::QubitId;

/// Largest register accepted by dense circuit simulation.
pub const MAX_CIRCUIT_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Ref(usize),
    Q(QubitId),
}

pub(crate) fn apply_gate<L: PartialEq + Copy>(
    t: &mut Tensor<L>,
    g: &Gate,
    label: impl Fn(QubitId) -> L,
    alpha0: Alpha0,
) {
    let pos = |q: QubitId| t.pos(label(q)).expect("gate qubit is live");
    match g {
        Gate::Hadamard(q) => {
            let p = pos(*q);
            t.apply_1q(p, &mat_h());
        }
        Gate::RotZ(q, a) => {
            let p = pos(*q);
            t.apply_1q(p, &mat_rz(a.radians(alpha0)));
        }
        Gate::ControlledZ(a, b) => {
            let (pa, pb) = (pos(*a), pos(*b));
            t.apply_cz(pa, pb);
        }
        Gate::FanOut { control, targets } => {
            let cbit = 1usize << pos(*control);
            let tmask = targets.iter().fold(0usize, |m, &q| m | 1 << pos(q));
            for i in 0..t.amps.len() {
                let j = i ^ tmask;
                if i & cbit != 0 && i < j {
                    t.amps.swap(i, j);
                }
            }
        }
    }
}

/// Runs `gates` on a state that holds every qubit they touch.
pub fn apply_gates(state: &StateVector, gates: &[Gate], alpha0: Alpha0) -> Result<StateVector> {
    let mut t = state.to_tensor();
    for (i, g) in gates.iter().enumerate() {
        if let Some(q) = g.qubits().into_iter().find(|q| t.pos(*q).is_none()) {
            return Err(Error::InputMismatch(format!(
                "gate {i} acts on {q}, absent from the state"
            )));
        }
        apply_gate(&mut t, g, |q| q, alpha0);
    }
    Ok(StateVector::from_tensor(t))
}

/// Unnormalized Choi vector after the circuit: refs paired with inputs,
/// other qubits in `|0⟩`.
fn choi_vector(c: &Circuit, alpha0: Alpha0) -> Result<Tensor<Slot>> {
    c.validate()?;
    let width = c.register.len() + c.inputs.len();
    if c.register.len() > MAX_CIRCUIT_QUBITS {
        return Err(Error::RegisterTooLarge {
            width: c.register.len(),
            limit: MAX_CIRCUIT_QUBITS,
        });
    }
    debug_assert!(width <= 2 * MAX_CIRCUIT_QUBITS);
    let mut t = Tensor::scalar(ONE);
    for (k, &q) in c.inputs.iter().enumerate() {
        t.append_pair(Slot::Ref(k), Slot::Q(q), [ONE, ZERO, ZERO, ONE]);
    }
    for &q in &c.register {
        if !c.inputs.contains(&q) {
            t.append(Slot::Q(q), [ONE, ZERO]);
        }
    }
    for g in &c.gates {
        apply_gate(&mut t, g, Slot::Q, alpha0);
    }
    Ok(t)
}

/// Matrix from input basis (bit `k` = `inputs[k]`) to output basis.
pub fn circuit_unitary(c: &Circuit, alpha0: Alpha0) -> Result<DMatrix<C64>> {
    if !c.is_unitary_form() || c.inputs.len() != c.outputs.len() {
        return Err(Error::InvalidCircuit(
            "unitary form needs inputs = outputs = register".into(),
        ));
    }
    let t = choi_vector(c, alpha0)?;
    let n = c.inputs.len();
    let order: Vec<Slot> = c
        .outputs
        .iter()
        .map(|&q| Slot::Q(q))
        .chain((0..n).map(Slot::Ref))
        .collect();
    let v = t.permuted(&order);
    let d = 1usize << n;
    Ok(DMatrix::from_fn(d, d, |o, i| v.amps[o + (i << n)]))
}

/// Ancillas start in `|0⟩`; non-outputs are measured and discarded.
pub fn circuit_channel(c: &Circuit, alpha0: Alpha0) -> Result<Channel> {
    let t = choi_vector(c, alpha0)?;
    let n_in = c.inputs.len();
    let discarded: Vec<QubitId> = c
        .register
        .iter()
        .copied()
        .filter(|q| !c.outputs.contains(q))
        .collect();
    let order: Vec<Slot> = c
        .outputs
        .iter()
        .map(|&q| Slot::Q(q))
        .chain((0..n_in).map(Slot::Ref))
        .chain(discarded.iter().map(|&q| Slot::Q(q)))
        .collect();
    let v = t.permuted(&order);
    let dim = 1usize << (c.outputs.len() + n_in);
    let rest = 1usize << discarded.len();
    // column k holds the slice with discarded bits equal to k
    let m = DMatrix::from_column_slice(dim, rest, &v.amps);
    let choi = &m * m.adjoint();
    Ok(Channel {
        inputs: c.inputs.clone(),
        outputs: c.outputs.clone(),
        choi,
    })
}

/// Matrix of a single gate over its own qubits (in [`Gate::qubits`] order).
pub fn gate_unitary(g: &Gate, alpha0: Alpha0) -> DMatrix<C64> {
    let qs = g.qubits();
    let c = Circuit::on(&qs, vec![g.clone()]);
    circuit_unitary(&c, alpha0).expect("single gates are simulable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::circuit::build_parity_via_fanout;
    use crate::simulate::{channels_equal, parity_unitary};

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    #[test]
    fn single_hadamard() {
        let u = gate_unitary(&Gate::Hadamard(q(1)), Alpha0::default());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u[(1, 1)] - C64::new(-h, 0.0)).norm() < 1e-12);
        assert!((u[(0, 1)] - C64::new(h, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rotation_is_diagonal_phase() {
        let u = gate_unitary(&Gate::RotZ(q(1), Angle::HALF_PI), Alpha0::default());
        assert!((u[(1, 1)] - C64::new(0.0, 1.0)).norm() < 1e-12);
        assert_eq!(u[(0, 0)], ONE);
    }

    #[test]
    fn parity_builder_matches_permutation() {
        let u = circuit_unitary(&build_parity_via_fanout(3).unwrap(), Alpha0::default()).unwrap();
        let p = parity_unitary(3);
        assert!((u - p).iter().all(|x| x.norm() < 1e-12));
    }

    #[test]
    fn untouched_ancilla_is_discarded() {
        let c = Circuit::new([q(1), q(2)], vec![q(1)], vec![q(1)], vec![]);
        let ch = circuit_channel(&c, Alpha0::default()).unwrap();
        assert!(
            channels_equal(&ch, &Channel::identity(&[q(1)]), 1e-12)
                .unwrap()
                .equal
        );
    }

    #[test]
    fn measured_line_dephases() {
        // H on an input that is then discarded leaves a 0-qubit output
        let c = Circuit::new([q(1)], vec![q(1)], vec![], vec![Gate::Hadamard(q(1))]);
        let ch = circuit_channel(&c, Alpha0::default()).unwrap();
        assert!(ch.is_trace_preserving(1e-12));
    }

    #[test]
    fn too_large_register_is_refused() {
        let ids: Vec<QubitId> = (1..=13).map(q).collect();
        let c = Circuit::on(&ids, vec![]);
        assert!(matches!(
            circuit_unitary(&c, Alpha0::default()),
            Err(Error::RegisterTooLarge { .. })
        ));
    }
}
