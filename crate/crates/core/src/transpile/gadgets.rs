//! Single-gate pattern templates.
//!
//! `E_ab M_a^θ X_b^{s_a}` maps `ψ` to `H·Rz(−θ)·ψ`, so the rotation gadget
//! measures at `−α` before the trailing `t_H` to realize `RotZ(α)`.

use crate::angle::Angle;
use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::pattern::{Command, Pattern, QubitId, Signal};

fn q(v: u32) -> QubitId {
    QubitId(v)
}

/// `E_ab M_a^θ X_b^{s_a}`.
fn teleport_step(a: QubitId, b: QubitId, theta: Angle) -> [Command; 3] {
    [
        Command::Entangle(a, b),
        Command::measure(a, theta),
        Command::x(b, Signal::of([a])),
    ]
}

/// `t_H = ({1,2}, {1}, {2}, X_2^{s_1} M_1^0 E_12)`.
pub fn hadamard_gadget() -> Pattern {
    Pattern::new(
        [q(1), q(2)],
        vec![q(1)],
        vec![q(2)],
        teleport_step(q(1), q(2), Angle::ZERO).to_vec(),
    )
}

/// `t_ΛZ = ({1,2}, {1,2}, {1,2}, E_12)`.
pub fn cz_gadget() -> Pattern {
    Pattern::new(
        [q(1), q(2)],
        vec![q(1), q(2)],
        vec![q(1), q(2)],
        vec![Command::Entangle(q(1), q(2))],
    )
}

/// `t_H ∘ (E_12 M_1^{−α} X_2^{s_1})` on `{1,2,3}`: the channel of `RotZ(α)`.
pub fn rotation_gadget(alpha: Angle) -> Pattern {
    let mut commands = teleport_step(q(1), q(2), -alpha).to_vec();
    commands.extend(teleport_step(q(2), q(3), Angle::ZERO));
    Pattern::new([q(1), q(2), q(3)], vec![q(1)], vec![q(3)], commands)
}

/// Template for one gate of the fixed basis. Inputs and outputs follow the
/// order of [`Gate::qubits`].
pub fn gate_gadget(g: &Gate) -> Result<Pattern> {
    match g {
        Gate::Hadamard(_) => Ok(hadamard_gadget()),
        Gate::RotZ(_, a) => Ok(rotation_gadget(*a)),
        Gate::ControlledZ(..) => Ok(cz_gadget()),
        Gate::FanOut { .. } => Err(Error::FanOutGadget),
    }
}

/// The gadget templates, with the rotation taken at `α0`.
#[derive(Debug, Clone)]
pub struct GadgetCatalog {
    pub entries: Vec<(&'static str, Pattern)>,
}

impl Default for GadgetCatalog {
    fn default() -> Self {
        GadgetCatalog {
            entries: vec![
                ("H", hadamard_gadget()),
                ("RZ", rotation_gadget(Angle::alpha0_multiple(1))),
                ("CZ", cz_gadget()),
            ],
        }
    }
}

impl GadgetCatalog {
    pub fn max_depth(&self) -> usize {
        self.entries
            .iter()
            .map(|(_, p)| p.depth())
            .max()
            .unwrap_or(0)
    }

    pub fn max_size(&self) -> usize {
        self.entries
            .iter()
            .map(|(_, p)| p.size())
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Alpha0;
    use crate::circuit::Circuit;
    use crate::simulate::{
        channels_equal, check_determinism, circuit_channel, pattern_channel, SimOptions,
    };

    fn gate_channel(g: &Gate) -> crate::simulate::Channel {
        circuit_channel(
            &Circuit::on(&g.qubits(), vec![g.clone()]),
            Alpha0::default(),
        )
        .unwrap()
    }

    #[test]
    fn every_template_matches_its_gate() {
        let gates = [
            Gate::Hadamard(q(1)),
            Gate::ControlledZ(q(1), q(2)),
            Gate::RotZ(q(1), Angle::alpha0_multiple(1)),
            Gate::RotZ(q(1), Angle::pi_fraction(1, 4)),
            Gate::RotZ(q(1), Angle::new(3, 4, -2)),
        ];
        for g in &gates {
            let t = gate_gadget(g).unwrap();
            assert!(t.is_well_formed());
            let c = channels_equal(&pattern_channel(&t).unwrap(), &gate_channel(g), 1e-9).unwrap();
            assert!(c.equal, "{g:?}: distance {}", c.distance);
            assert!(check_determinism(&t, 1e-9, &SimOptions::default()).unwrap());
        }
    }

    #[test]
    fn measuring_at_alpha_rotates_by_minus_alpha() {
        let a = Angle::alpha0_multiple(1);
        let mut commands = teleport_step(q(1), q(2), a).to_vec();
        commands.extend(teleport_step(q(2), q(3), Angle::ZERO));
        let t = Pattern::new([q(1), q(2), q(3)], vec![q(1)], vec![q(3)], commands);
        let ch = pattern_channel(&t).unwrap();
        let minus = gate_channel(&Gate::RotZ(q(1), -a));
        let plus = gate_channel(&Gate::RotZ(q(1), a));
        assert!(channels_equal(&ch, &minus, 1e-9).unwrap().equal);
        assert!(!channels_equal(&ch, &plus, 1e-6).unwrap().equal);
    }

    #[test]
    fn quoted_templates() {
        let h = hadamard_gadget();
        assert_eq!((h.size(), h.depth()), (4, 3));
        assert_eq!(cz_gadget().commands, vec![Command::Entangle(q(1), q(2))]);
        assert!(matches!(
            gate_gadget(&Gate::FanOut {
                control: q(1),
                targets: vec![q(2)]
            }),
            Err(Error::FanOutGadget)
        ));
        let cat = GadgetCatalog::default();
        assert_eq!(cat.max_depth(), 6);
        assert_eq!(cat.max_size(), 8);
    }
}
