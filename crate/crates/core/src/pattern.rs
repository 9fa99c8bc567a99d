//! Measurement patterns: commands, well-formedness, metrics and the
//! structural transformations (composition, standardization, reordering).
//!
//! Commands are stored in execution order: `commands[0]` runs first.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::layering::Layering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct QubitId(pub u32);

impl fmt::Display for QubitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for QubitId {
    fn from(v: u32) -> Self {
        QubitId(v)
    }
}

/// XOR of recorded outcomes `s_j` for every `j` in `outcomes`, XOR `constant`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Signal {
    outcomes: BTreeSet<QubitId>,
    constant: bool,
}

impl Signal {
    pub fn empty() -> Self {
        Signal::default()
    }

    pub fn one() -> Self {
        Signal {
            outcomes: BTreeSet::new(),
            constant: true,
        }
    }

    pub fn of<I: IntoIterator<Item = QubitId>>(ids: I) -> Self {
        let mut s = Signal::empty();
        for q in ids {
            s.toggle(q);
        }
        s
    }

    pub fn with_constant(mut self, c: bool) -> Self {
        self.constant = c;
        self
    }

    pub fn outcomes(&self) -> &BTreeSet<QubitId> {
        &self.outcomes
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    /// A signal that always evaluates to 0.
    pub fn is_trivial(&self) -> bool {
        self.outcomes.is_empty() && !self.constant
    }

    pub fn width(&self) -> usize {
        self.outcomes.len()
    }

    pub fn contains(&self, q: QubitId) -> bool {
        self.outcomes.contains(&q)
    }

    pub fn toggle(&mut self, q: QubitId) {
        if !self.outcomes.remove(&q) {
            self.outcomes.insert(q);
        }
    }

    pub fn xor(&self, other: &Signal) -> Signal {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn xor_assign(&mut self, other: &Signal) {
        for &q in &other.outcomes {
            self.toggle(q);
        }
        self.constant ^= other.constant;
    }

    /// Evaluates the signal; `None` if some referenced outcome is unknown.
    pub fn eval(&self, outcome: impl Fn(QubitId) -> Option<bool>) -> Option<bool> {
        let mut v = self.constant;
        for &q in &self.outcomes {
            v ^= outcome(q)?;
        }
        Some(v)
    }

    /// Replaces each `s_q` with `subst[q]` where present.
    pub fn substitute(&self, subst: &HashMap<QubitId, Signal>) -> Signal {
        let mut out = Signal::empty().with_constant(self.constant);
        for q in &self.outcomes {
            match subst.get(q) {
                Some(s) => out.xor_assign(s),
                None => out.toggle(*q),
            }
        }
        out
    }

    pub fn map_qubits(&self, f: impl Fn(QubitId) -> QubitId) -> Signal {
        Signal::of(self.outcomes.iter().map(|&q| f(q))).with_constant(self.constant)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Command {
    Entangle(QubitId, QubitId),
    /// `^t[M_qubit^angle]^s`; both signals trivial for a plain measurement.
    Measure {
        qubit: QubitId,
        angle: Angle,
        s_domain: Signal,
        t_domain: Signal,
    },
    CorrectX {
        qubit: QubitId,
        signal: Signal,
    },
    CorrectZ {
        qubit: QubitId,
        signal: Signal,
    },
}

impl Command {
    pub fn measure(qubit: QubitId, angle: Angle) -> Self {
        Command::Measure {
            qubit,
            angle,
            s_domain: Signal::empty(),
            t_domain: Signal::empty(),
        }
    }

    pub fn x(qubit: QubitId, signal: Signal) -> Self {
        Command::CorrectX { qubit, signal }
    }

    pub fn z(qubit: QubitId, signal: Signal) -> Self {
        Command::CorrectZ { qubit, signal }
    }

    /// Qubits the command acts on.
    pub fn acted(&self) -> Vec<QubitId> {
        match self {
            Command::Entangle(a, b) => vec![*a, *b],
            Command::Measure { qubit, .. }
            | Command::CorrectX { qubit, .. }
            | Command::CorrectZ { qubit, .. } => vec![*qubit],
        }
    }

    pub fn signals(&self) -> Vec<&Signal> {
        match self {
            Command::Entangle(..) => vec![],
            Command::Measure {
                s_domain, t_domain, ..
            } => vec![s_domain, t_domain],
            Command::CorrectX { signal, .. } | Command::CorrectZ { signal, .. } => vec![signal],
        }
    }

    /// Acted qubits plus every qubit whose outcome the command reads.
    pub fn domain(&self) -> BTreeSet<QubitId> {
        let mut d: BTreeSet<QubitId> = self.acted().into_iter().collect();
        for s in self.signals() {
            d.extend(s.outcomes().iter().copied());
        }
        d
    }

    /// Number of qubits affected: 2 for entangling, 1 otherwise.
    pub fn size(&self) -> usize {
        match self {
            Command::Entangle(..) => 2,
            _ => 1,
        }
    }

    pub fn is_dependent_measurement(&self) -> bool {
        matches!(self, Command::Measure { s_domain, t_domain, .. }
            if !s_domain.is_trivial() || !t_domain.is_trivial())
    }

    pub fn is_signal_bearing(&self) -> bool {
        self.signals().iter().any(|s| s.width() > 0)
    }

    pub fn map_qubits(&self, f: &impl Fn(QubitId) -> QubitId) -> Command {
        match self {
            Command::Entangle(a, b) => Command::Entangle(f(*a), f(*b)),
            Command::Measure {
                qubit,
                angle,
                s_domain,
                t_domain,
            } => Command::Measure {
                qubit: f(*qubit),
                angle: *angle,
                s_domain: s_domain.map_qubits(f),
                t_domain: t_domain.map_qubits(f),
            },
            Command::CorrectX { qubit, signal } => Command::CorrectX {
                qubit: f(*qubit),
                signal: signal.map_qubits(f),
            },
            Command::CorrectZ { qubit, signal } => Command::CorrectZ {
                qubit: f(*qubit),
                signal: signal.map_qubits(f),
            },
        }
    }

    pub fn substitute_signals(&self, subst: &HashMap<QubitId, Signal>) -> Command {
        if subst.is_empty() {
            return self.clone();
        }
        match self {
            Command::Entangle(..) => self.clone(),
            Command::Measure {
                qubit,
                angle,
                s_domain,
                t_domain,
            } => Command::Measure {
                qubit: *qubit,
                angle: *angle,
                s_domain: s_domain.substitute(subst),
                t_domain: t_domain.substitute(subst),
            },
            Command::CorrectX { qubit, signal } => Command::CorrectX {
                qubit: *qubit,
                signal: signal.substitute(subst),
            },
            Command::CorrectZ { qubit, signal } => Command::CorrectZ {
                qubit: *qubit,
                signal: signal.substitute(subst),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Rule {
    DuplicateInput(QubitId),
    DuplicateOutput(QubitId),
    InputOutsideRegister(QubitId),
    OutputOutsideRegister(QubitId),
    QubitOutsideRegister(QubitId),
    SelfEntangle(QubitId),
    CommandOnMeasuredQubit(QubitId),
    SignalReferencesUnmeasured(QubitId),
    OutputMeasured(QubitId),
    NonOutputNotMeasured(QubitId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Offending command index, `None` for register-level rules.
    pub command: Option<usize>,
    pub rule: Rule,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(i) = self.command {
            write!(f, "command {i}: ")?;
        }
        match &self.rule {
            Rule::DuplicateInput(q) => write!(f, "input {q} listed twice"),
            Rule::DuplicateOutput(q) => write!(f, "output {q} listed twice"),
            Rule::InputOutsideRegister(q) => write!(f, "input {q} not in register"),
            Rule::OutputOutsideRegister(q) => write!(f, "output {q} not in register"),
            Rule::QubitOutsideRegister(q) => write!(f, "qubit {q} not in register"),
            Rule::SelfEntangle(q) => write!(f, "entangling qubit {q} with itself"),
            Rule::CommandOnMeasuredQubit(q) => write!(f, "command on measured qubit {q}"),
            Rule::SignalReferencesUnmeasured(q) => {
                write!(f, "signal references unmeasured qubit {q}")
            }
            Rule::OutputMeasured(q) => write!(f, "output qubit {q} is measured"),
            Rule::NonOutputNotMeasured(q) => write!(f, "non-output qubit {q} is never measured"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Pattern {
    pub register: BTreeSet<QubitId>,
    /// Ordered; the order fixes the input tensor factor order.
    pub inputs: Vec<QubitId>,
    pub outputs: Vec<QubitId>,
    pub commands: Vec<Command>,
}

impl Pattern {
    pub fn new(
        register: impl IntoIterator<Item = QubitId>,
        inputs: Vec<QubitId>,
        outputs: Vec<QubitId>,
        commands: Vec<Command>,
    ) -> Self {
        Pattern {
            register: register.into_iter().collect(),
            inputs,
            outputs,
            commands,
        }
    }

    /// The empty pattern with `I = O = V = ids`.
    pub fn identity(ids: &[QubitId]) -> Self {
        Pattern::new(ids.iter().copied(), ids.to_vec(), ids.to_vec(), vec![])
    }

    /// `X3^{s1+s2} M2^α X2^{s1} M1^0 E12 E23 E13`, stored in execution
    /// order. Despite its name it is not a rotation: its branches disagree.
    pub fn rotation_example(alpha: Angle) -> Self {
        let q = QubitId;
        Pattern::new(
            [q(1), q(2), q(3)],
            vec![q(1)],
            vec![q(3)],
            vec![
                Command::Entangle(q(1), q(3)),
                Command::Entangle(q(2), q(3)),
                Command::Entangle(q(1), q(2)),
                Command::measure(q(1), Angle::ZERO),
                Command::x(q(2), Signal::of([q(1)])),
                Command::measure(q(2), alpha),
                Command::x(q(3), Signal::of([q(1), q(2)])),
            ],
        )
    }

    pub fn max_id(&self) -> u32 {
        self.register.iter().map(|q| q.0).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let reg_rule = |rule| Violation {
            command: None,
            rule,
        };
        let mut seen = HashSet::new();
        for &q in &self.inputs {
            if !seen.insert(q) {
                out.push(reg_rule(Rule::DuplicateInput(q)));
            }
            if !self.register.contains(&q) {
                out.push(reg_rule(Rule::InputOutsideRegister(q)));
            }
        }
        seen.clear();
        for &q in &self.outputs {
            if !seen.insert(q) {
                out.push(reg_rule(Rule::DuplicateOutput(q)));
            }
            if !self.register.contains(&q) {
                out.push(reg_rule(Rule::OutputOutsideRegister(q)));
            }
        }

        let mut measured: HashSet<QubitId> = HashSet::new();
        for (idx, cmd) in self.commands.iter().enumerate() {
            let mut push = |rule| {
                out.push(Violation {
                    command: Some(idx),
                    rule,
                })
            };
            for q in cmd.acted() {
                if !self.register.contains(&q) {
                    push(Rule::QubitOutsideRegister(q));
                }
                if measured.contains(&q) {
                    push(Rule::CommandOnMeasuredQubit(q));
                }
            }
            if let Command::Entangle(a, b) = cmd {
                if a == b {
                    push(Rule::SelfEntangle(*a));
                }
            }
            for s in cmd.signals() {
                for &q in s.outcomes() {
                    if !measured.contains(&q) {
                        push(Rule::SignalReferencesUnmeasured(q));
                    }
                }
            }
            if let Command::Measure { qubit, .. } = cmd {
                if self.outputs.contains(qubit) {
                    push(Rule::OutputMeasured(*qubit));
                }
                measured.insert(*qubit);
            }
        }
        let outputs: HashSet<_> = self.outputs.iter().collect();
        for q in &self.register {
            if !outputs.contains(q) && !measured.contains(q) {
                out.push(reg_rule(Rule::NonOutputNotMeasured(*q)));
            }
        }
        out
    }

    pub fn is_well_formed(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn ensure_well_formed(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::IllFormed(v))
        }
    }

    /// Drops corrections whose signal is identically 0.
    pub fn normalized(&self) -> Pattern {
        let mut t = self.clone();
        t.commands.retain(|c| match c {
            Command::CorrectX { signal, .. } | Command::CorrectZ { signal, .. } => {
                !signal.is_trivial()
            }
            _ => true,
        });
        t
    }

    pub fn size(&self) -> usize {
        self.commands.iter().map(Command::size).sum()
    }

    /// Sequence-relative layering; does not require well-formedness.
    pub fn layering_unchecked(&self) -> Layering {
        Layering::from_domains(self.commands.iter().map(|c| c.domain()))
    }

    pub fn layers(&self) -> Result<Layering> {
        self.ensure_well_formed()?;
        Ok(self.layering_unchecked())
    }

    pub fn depth(&self) -> usize {
        self.layering_unchecked().depth()
    }

    pub fn measured_qubits(&self) -> Vec<QubitId> {
        self.commands
            .iter()
            .filter_map(|c| match c {
                Command::Measure { qubit, .. } => Some(*qubit),
                _ => None,
            })
            .collect()
    }

    pub fn has_dependent_measurements(&self) -> bool {
        self.commands.iter().any(Command::is_dependent_measurement)
    }

    pub fn relabel(&self, f: impl Fn(QubitId) -> QubitId) -> Pattern {
        Pattern {
            register: self.register.iter().map(|&q| f(q)).collect(),
            inputs: self.inputs.iter().map(|&q| f(q)).collect(),
            outputs: self.outputs.iter().map(|&q| f(q)).collect(),
            commands: self.commands.iter().map(|c| c.map_qubits(&f)).collect(),
        }
    }

    fn fresh_offset(&self, other: &Pattern) -> u32 {
        let min2 = other.register.iter().map(|q| q.0).min().unwrap_or(1);
        self.max_id() + u32::from(min2 == 0)
    }
}

/// `t2 ∘ t1`, gluing `t1`'s outputs to `t2`'s inputs position by position.
pub fn compose_seq(t1: &Pattern, t2: &Pattern) -> Result<Pattern> {
    if t1.outputs.len() != t2.inputs.len() {
        return Err(Error::CompositionArity {
            outputs: t1.outputs.len(),
            inputs: t2.inputs.len(),
        });
    }
    let glue: Vec<(QubitId, QubitId)> = t1
        .outputs
        .iter()
        .copied()
        .zip(t2.inputs.iter().copied())
        .collect();
    compose_seq_with(t1, t2, &glue)
}

/// `t2 ∘ t1` with an explicit bijection `(output of t1, input of t2)`.
///
/// Qubits of `t2` outside its inputs are shifted by the largest id of `t1`.
pub fn compose_seq_with(
    t1: &Pattern,
    t2: &Pattern,
    glue: &[(QubitId, QubitId)],
) -> Result<Pattern> {
    if t1.outputs.len() != t2.inputs.len() || glue.len() != t1.outputs.len() {
        return Err(Error::CompositionArity {
            outputs: t1.outputs.len(),
            inputs: t2.inputs.len(),
        });
    }
    let outs: HashSet<_> = glue.iter().map(|g| g.0).collect();
    let ins: HashMap<_, _> = glue.iter().map(|&(o, i)| (i, o)).collect();
    if outs.len() != glue.len()
        || ins.len() != glue.len()
        || !t1.outputs.iter().all(|q| outs.contains(q))
        || !t2.inputs.iter().all(|q| ins.contains_key(q))
    {
        return Err(Error::InvalidGlue(
            "glue must be a bijection from the first pattern's outputs to the second's inputs"
                .into(),
        ));
    }
    let offset = t1.fresh_offset(t2);
    let t2r = t2.relabel(|q| ins.get(&q).copied().unwrap_or(QubitId(q.0 + offset)));
    let mut commands = t1.commands.clone();
    commands.extend(t2r.commands);
    Ok(Pattern {
        register: t1.register.union(&t2r.register).copied().collect(),
        inputs: t1.inputs.clone(),
        outputs: t2r.outputs,
        commands,
    })
}

/// `t1 ⊗ t2`; `t2` is shifted by the largest id of `t1`.
pub fn compose_par(t1: &Pattern, t2: &Pattern) -> Pattern {
    let offset = t1.fresh_offset(t2);
    let t2r = t2.relabel(|q| QubitId(q.0 + offset));
    let mut commands = t1.commands.clone();
    commands.extend(t2r.commands);
    let mut inputs = t1.inputs.clone();
    inputs.extend(t2r.inputs);
    let mut outputs = t1.outputs.clone();
    outputs.extend(t2r.outputs);
    Pattern {
        register: t1.register.union(&t2r.register).copied().collect(),
        inputs,
        outputs,
        commands,
    }
}

/// Rewrites every dependent measurement `^t[M_i^a]^s` into `X_i^s` followed
/// by the plain measurement `M_i^a`. The `Z_i^t` part is absorbed into the
/// outcome: `M_i^a Z_i^t` yields `s_i ⊕ t`, so later signals read
/// `s_i ⊕ t` in place of `s_i`.
pub fn standardize_dependent_measurements(t: &Pattern) -> Result<Pattern> {
    t.ensure_well_formed()?;
    if !t.has_dependent_measurements() {
        return Ok(t.clone());
    }
    let mut subst: HashMap<QubitId, Signal> = HashMap::new();
    let mut commands = Vec::with_capacity(t.commands.len());
    for cmd in &t.commands {
        match cmd.substitute_signals(&subst) {
            Command::Measure {
                qubit,
                angle,
                s_domain,
                t_domain,
            } => {
                if !s_domain.is_trivial() {
                    commands.push(Command::x(qubit, s_domain));
                }
                if !t_domain.is_trivial() {
                    let mut reading = t_domain;
                    reading.toggle(qubit);
                    subst.insert(qubit, reading);
                }
                commands.push(Command::measure(qubit, angle));
            }
            other => commands.push(other),
        }
    }
    Ok(Pattern {
        commands,
        ..t.clone()
    }
    .normalized())
}

/// Stable-sorts commands by layer. Only adjacent commands with disjoint
/// domains ever trade places, so the channel and the depth are unchanged.
pub fn reorder_disjoint(t: &Pattern) -> Result<Pattern> {
    let layering = t.layers()?;
    let mut order: Vec<usize> = (0..t.commands.len()).collect();
    order.sort_by_key(|&i| layering.layer_of[i]);
    Ok(Pattern {
        commands: order.into_iter().map(|i| t.commands[i].clone()).collect(),
        ..t.clone()
    })
}
