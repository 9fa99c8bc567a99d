//! Classically controlled computation schemes: preparations, unitaries,
//! observables and corrections, each carried as a small constant-depth
//! circuit on local qubits `1..=arity`.

mod catalog;
mod compile;
mod sim;

use std::collections::{BTreeSet, HashSet};

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::angle::{Alpha0, Angle};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::layering::Layering;
use crate::pattern::{Command, Pattern, QubitId, Signal};
use crate::simulate::circuit_unitary;
use crate::transpile::Metrics;

pub use catalog::{ancilla_hadamard, builtin_scheme, builtin_schemes, SCHEME_NAMES};
pub use compile::{scheme_to_fanout_circuit, scheme_to_pattern};
pub use sim::{scheme_channel, scheme_channel_with, SCHEME_BRANCH_LIMIT};

/// Deepest carried circuit a scheme may certify.
pub const MAX_CERTIFIED_DEPTH: usize = 16;

/// Gates on local qubits `1..=arity` with their recorded depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Local {
    pub arity: usize,
    pub gates: Vec<Gate>,
    pub depth: usize,
}

impl Local {
    pub fn new(arity: usize, gates: Vec<Gate>) -> Self {
        let depth = Self::measure(arity, &gates);
        Local {
            arity,
            gates,
            depth,
        }
    }

    fn ids(arity: usize) -> Vec<QubitId> {
        (1..=arity as u32).map(QubitId).collect()
    }

    fn measure(arity: usize, gates: &[Gate]) -> usize {
        Circuit::on(&Self::ids(arity), gates.to_vec()).depth()
    }

    /// Gates with local qubit `k` sent to `qubits[k-1]`.
    pub fn placed(&self, qubits: &[QubitId]) -> Vec<Gate> {
        self.gates
            .iter()
            .map(|g| g.map_qubits(&|q: QubitId| qubits[q.0 as usize - 1]))
            .collect()
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        circuit_unitary(
            &Circuit::on(&Self::ids(self.arity), self.gates.clone()),
            Alpha0::default(),
        )
        .expect("local circuits are small")
    }

    fn certify(&self, what: &str) -> Result<()> {
        let ids = Self::ids(self.arity);
        for g in &self.gates {
            if let Some(q) = g.qubits().into_iter().find(|q| !ids.contains(q)) {
                return Err(Error::InvalidScheme(format!(
                    "{what}: gate on {q} outside 1..={}",
                    self.arity
                )));
            }
        }
        let d = Self::measure(self.arity, &self.gates);
        if d != self.depth || d > MAX_CERTIFIED_DEPTH {
            return Err(Error::InvalidScheme(format!(
                "{what}: non-constant-depth certificate (recorded {}, actual {d})",
                self.depth
            )));
        }
        Ok(())
    }
}

/// State `circuit·|0⟩` on one fresh qubit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Preparation {
    pub name: String,
    pub circuit: Local,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnitaryKind {
    pub name: String,
    pub circuit: Local,
}

/// Two-outcome observable: after `basis` (preceded by `RotZ(−α)` on local
/// qubit 1 when parametric) the outcome is the parity of all qubits read
/// in the standard basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Observable {
    pub name: String,
    pub basis: Local,
    pub parametric: bool,
    /// Measured qubits are consumed and the outcome is labelled by the first.
    pub destructive: bool,
}

impl Observable {
    pub fn basis_gates(&self, qubits: &[QubitId], angle: Angle) -> Vec<Gate> {
        let mut gates = Vec::new();
        if self.parametric && !angle.is_zero() {
            gates.push(Gate::RotZ(qubits[0], -angle));
        }
        gates.extend(self.basis.placed(qubits));
        gates
    }
}

/// One-qubit correction with a diagonalizer `D` such that `D·C·D†` is
/// `Z` up to phase.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorrectionKind {
    pub name: String,
    pub circuit: Local,
    pub diagonalizer: Option<Local>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scheme {
    pub name: String,
    /// The first entry prepares non-input qubits that have no explicit
    /// preparation command.
    pub inits: Vec<Preparation>,
    pub unitaries: Vec<UnitaryKind>,
    pub measurements: Vec<Observable>,
    pub corrections: Vec<CorrectionKind>,
}

const DIAGONAL_TOL: f64 = 1e-10;

impl Scheme {
    pub fn init(&self, name: &str) -> Option<&Preparation> {
        self.inits.iter().find(|k| k.name == name)
    }

    pub fn unitary(&self, name: &str) -> Option<&UnitaryKind> {
        self.unitaries.iter().find(|k| k.name == name)
    }

    pub fn measurement(&self, name: &str) -> Option<&Observable> {
        self.measurements.iter().find(|k| k.name == name)
    }

    pub fn correction(&self, name: &str) -> Option<&CorrectionKind> {
        self.corrections.iter().find(|k| k.name == name)
    }

    pub fn validate(&self) -> Result<()> {
        let names = [
            self.inits.iter().map(|k| &k.name).collect::<Vec<_>>(),
            self.unitaries.iter().map(|k| &k.name).collect(),
            self.measurements.iter().map(|k| &k.name).collect(),
            self.corrections.iter().map(|k| &k.name).collect(),
        ];
        for family in names {
            let mut seen = HashSet::new();
            if let Some(n) = family.into_iter().find(|n| !seen.insert(*n)) {
                return Err(Error::InvalidScheme(format!("duplicate kind {n}")));
            }
        }
        for k in &self.inits {
            if k.circuit.arity != 1 {
                return Err(Error::InvalidScheme(format!(
                    "preparation {} is not on one qubit",
                    k.name
                )));
            }
            k.circuit.certify(&k.name)?;
        }
        for k in &self.unitaries {
            k.circuit.certify(&k.name)?;
        }
        for k in &self.measurements {
            if k.basis.arity == 0 {
                return Err(Error::InvalidScheme(format!(
                    "observable {} has no qubits",
                    k.name
                )));
            }
            k.basis.certify(&k.name)?;
        }
        for k in &self.corrections {
            self.check_correction(k)?;
        }
        Ok(())
    }

    fn check_correction(&self, k: &CorrectionKind) -> Result<()> {
        let err = |m: &str| Err(Error::InvalidScheme(format!("correction {}: {m}", k.name)));
        if k.circuit.arity != 1 {
            return err("not a one-qubit gate");
        }
        k.circuit.certify(&k.name)?;
        let Some(d) = &k.diagonalizer else {
            return err("missing diagonalizer");
        };
        if d.arity != 1 {
            return err("diagonalizer is not a one-qubit circuit");
        }
        d.certify(&k.name)?;
        let dm = d.matrix();
        let m = &dm * k.circuit.matrix() * dm.adjoint();
        if m[(0, 1)].norm() > DIAGONAL_TOL || m[(1, 0)].norm() > DIAGONAL_TOL {
            return err("diagonalizer leaves off-diagonal entries");
        }
        if (m[(1, 1)] + m[(0, 0)]).norm() > DIAGONAL_TOL {
            return err("diagonal form is not Z up to phase");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SchemeCommand {
    Init {
        kind: String,
        qubit: QubitId,
    },
    Unitary {
        kind: String,
        qubits: Vec<QubitId>,
    },
    /// `outcome` is `qubits[0]` for destructive observables and a label
    /// outside the register otherwise.
    Measure {
        kind: String,
        qubits: Vec<QubitId>,
        angle: Angle,
        outcome: QubitId,
    },
    Correct {
        kind: String,
        qubit: QubitId,
        signal: Signal,
    },
}

impl SchemeCommand {
    pub fn acted(&self) -> Vec<QubitId> {
        match self {
            SchemeCommand::Init { qubit, .. } | SchemeCommand::Correct { qubit, .. } => {
                vec![*qubit]
            }
            SchemeCommand::Unitary { qubits, .. } | SchemeCommand::Measure { qubits, .. } => {
                qubits.clone()
            }
        }
    }

    /// Touched qubits plus outcome labels written or read.
    pub fn domain(&self) -> BTreeSet<QubitId> {
        let mut d: BTreeSet<QubitId> = self.acted().into_iter().collect();
        match self {
            SchemeCommand::Measure { outcome, .. } => {
                d.insert(*outcome);
            }
            SchemeCommand::Correct { signal, .. } => d.extend(signal.outcomes().iter().copied()),
            _ => {}
        }
        d
    }

    pub fn size(&self) -> usize {
        self.acted().len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemePattern {
    pub register: BTreeSet<QubitId>,
    pub inputs: Vec<QubitId>,
    pub outputs: Vec<QubitId>,
    pub commands: Vec<SchemeCommand>,
}

impl SchemePattern {
    pub fn new(
        register: impl IntoIterator<Item = QubitId>,
        inputs: Vec<QubitId>,
        outputs: Vec<QubitId>,
        commands: Vec<SchemeCommand>,
    ) -> Self {
        SchemePattern {
            register: register.into_iter().collect(),
            inputs,
            outputs,
            commands,
        }
    }

    /// A one-way pattern as a pattern of the `oneway` scheme. Dependent
    /// measurements become `Z^t`, `X^s` then the plain measurement.
    pub fn from_one_way(t: &Pattern) -> Self {
        let mut commands = Vec::new();
        let correct = |kind: &str, qubit: QubitId, signal: &Signal| SchemeCommand::Correct {
            kind: kind.into(),
            qubit,
            signal: signal.clone(),
        };
        for c in &t.commands {
            match c {
                Command::Entangle(a, b) => commands.push(SchemeCommand::Unitary {
                    kind: "CZ".into(),
                    qubits: vec![*a, *b],
                }),
                Command::CorrectX { qubit, signal } => commands.push(correct("X", *qubit, signal)),
                Command::CorrectZ { qubit, signal } => commands.push(correct("Z", *qubit, signal)),
                Command::Measure {
                    qubit,
                    angle,
                    s_domain,
                    t_domain,
                } => {
                    if !t_domain.is_trivial() {
                        commands.push(correct("Z", *qubit, t_domain));
                    }
                    if !s_domain.is_trivial() {
                        commands.push(correct("X", *qubit, s_domain));
                    }
                    commands.push(SchemeCommand::Measure {
                        kind: "M".into(),
                        qubits: vec![*qubit],
                        angle: *angle,
                        outcome: *qubit,
                    });
                }
            }
        }
        SchemePattern::new(
            t.register.iter().copied(),
            t.inputs.clone(),
            t.outputs.clone(),
            commands,
        )
    }

    pub fn size(&self) -> usize {
        self.commands.iter().map(SchemeCommand::size).sum()
    }

    pub fn layering(&self) -> Layering {
        Layering::from_domains(self.commands.iter().map(SchemeCommand::domain))
    }

    pub fn depth(&self) -> usize {
        self.layering().depth()
    }

    pub fn max_id(&self) -> u32 {
        let outcomes = self.commands.iter().filter_map(|c| match c {
            SchemeCommand::Measure { outcome, .. } => Some(outcome.0),
            _ => None,
        });
        self.register
            .iter()
            .map(|q| q.0)
            .chain(outcomes)
            .max()
            .unwrap_or(0)
    }

    /// Non-input qubits without an explicit preparation, in register order.
    pub fn implicit_inits(&self) -> Vec<QubitId> {
        let explicit: HashSet<QubitId> = self
            .commands
            .iter()
            .filter_map(|c| match c {
                SchemeCommand::Init { qubit, .. } => Some(*qubit),
                _ => None,
            })
            .collect();
        self.register
            .iter()
            .copied()
            .filter(|q| !self.inputs.contains(q) && !explicit.contains(q))
            .collect()
    }

    /// Executability against `s`: known kinds with matching arity, no action
    /// on consumed qubits, signals over earlier outcomes, outputs alive.
    pub fn validate(&self, s: &Scheme) -> Result<()> {
        let err =
            |i: usize, m: String| Err(Error::InvalidSchemePattern(format!("command {i}: {m}")));
        for (name, list) in [("input", &self.inputs), ("output", &self.outputs)] {
            let mut seen = HashSet::new();
            for q in list {
                if !self.register.contains(q) || !seen.insert(*q) {
                    return Err(Error::InvalidSchemePattern(format!(
                        "{name} {q} is repeated or outside the register"
                    )));
                }
            }
        }
        // qubits that have been acted on, consumed qubits, written outcomes
        let mut touched: HashSet<QubitId> = self.inputs.iter().copied().collect();
        let mut consumed: HashSet<QubitId> = HashSet::new();
        let mut outcomes: HashSet<QubitId> = HashSet::new();
        let explicit: HashSet<QubitId> = self
            .commands
            .iter()
            .filter_map(|c| match c {
                SchemeCommand::Init { qubit, .. } => Some(*qubit),
                _ => None,
            })
            .collect();
        for (i, c) in self.commands.iter().enumerate() {
            let acted = c.acted();
            let mut distinct = HashSet::new();
            for q in &acted {
                if !self.register.contains(q) {
                    return err(i, format!("{q} is outside the register"));
                }
                if !distinct.insert(*q) {
                    return err(i, format!("{q} appears twice"));
                }
                if consumed.contains(q) {
                    return err(i, format!("{q} was consumed by a measurement"));
                }
            }
            match c {
                SchemeCommand::Init { kind, qubit } => {
                    if s.init(kind).is_none() {
                        return err(i, format!("unknown preparation {kind}"));
                    }
                    if touched.contains(qubit) {
                        return err(i, format!("{qubit} is prepared after use"));
                    }
                }
                SchemeCommand::Unitary { kind, qubits } => match s.unitary(kind) {
                    None => return err(i, format!("unknown unitary {kind}")),
                    Some(k) if k.circuit.arity != qubits.len() => {
                        return err(i, format!("{kind} takes {} qubits", k.circuit.arity))
                    }
                    _ => {}
                },
                SchemeCommand::Measure {
                    kind,
                    qubits,
                    angle,
                    outcome,
                } => {
                    let Some(k) = s.measurement(kind) else {
                        return err(i, format!("unknown observable {kind}"));
                    };
                    if k.basis.arity != qubits.len() {
                        return err(i, format!("{kind} takes {} qubits", k.basis.arity));
                    }
                    if !k.parametric && !angle.is_zero() {
                        return err(i, format!("{kind} takes no angle"));
                    }
                    if k.destructive {
                        if *outcome != qubits[0] {
                            return err(
                                i,
                                format!("destructive {kind} must be labelled {}", qubits[0]),
                            );
                        }
                    } else if self.register.contains(outcome) {
                        return err(
                            i,
                            format!("outcome label {outcome} collides with the register"),
                        );
                    }
                    if !outcomes.insert(*outcome) {
                        return err(i, format!("outcome {outcome} written twice"));
                    }
                    if k.destructive {
                        consumed.extend(qubits.iter().copied());
                    }
                }
                SchemeCommand::Correct { kind, signal, .. } => {
                    if s.correction(kind).is_none() {
                        return err(i, format!("unknown correction {kind}"));
                    }
                    if let Some(q) = signal.outcomes().iter().find(|q| !outcomes.contains(q)) {
                        return err(i, format!("signal reads {q} before it is measured"));
                    }
                }
            }
            for q in acted {
                if !touched.contains(&q) && !explicit.contains(&q) && s.inits.is_empty() {
                    return err(
                        i,
                        format!("{q} is not an input and the scheme has no preparations"),
                    );
                }
                touched.insert(q);
            }
        }
        if let Some(q) = self.outputs.iter().find(|q| consumed.contains(q)) {
            return Err(Error::InvalidSchemePattern(format!(
                "output {q} is consumed"
            )));
        }
        if s.inits.is_empty() {
            if let Some(q) = self.outputs.iter().find(|q| !touched.contains(q)) {
                return Err(Error::InvalidSchemePattern(format!(
                    "output {q} is never prepared"
                )));
            }
        }
        Ok(())
    }
}

pub fn scheme_metrics(p: &SchemePattern, s: &Scheme) -> Result<Metrics> {
    p.validate(s)?;
    Ok(Metrics {
        size: p.size(),
        depth: p.depth(),
    })
}
