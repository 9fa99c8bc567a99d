//! Pure-state execution of patterns: single runs driven by an outcome
//! oracle, and exhaustive branch enumeration on the Choi vector.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::schedule::scheduled;
use super::state::StateVector;
use super::tensor::Tensor;
use super::{
    effective_angle, equal_up_to_phase, measurement_bra, SimOptions, FRAC_1_SQRT_2, ONE, ZERO,
};
use crate::angle::Alpha0;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::pattern::{Command, Pattern, QubitId};

/// Source of measurement outcomes for [`run_pattern`].
#[derive(Debug, Clone)]
pub enum Oracle {
    /// Outcome per measured qubit.
    Forced(BTreeMap<QubitId, bool>),
    /// Outcomes in measurement order.
    Sequence(Vec<bool>),
    /// Born-rule sampling from a seeded generator.
    Seeded(u64),
}

#[derive(Debug, Clone)]
pub struct RunResult {
    /// Over the pattern's outputs, in output order.
    pub state: StateVector,
    /// In measurement order.
    pub outcomes: Vec<(QubitId, bool)>,
    pub probability: f64,
}

#[derive(Debug, Clone)]
pub struct BranchRecord {
    pub outcomes: BTreeMap<QubitId, bool>,
    /// Branch probability for the maximally mixed input, `‖K‖²/2^{|I|}`.
    pub weight: f64,
    /// Kraus operator `K`, `2^{|O|} × 2^{|I|}`.
    pub operator: DMatrix<C64>,
}

impl BranchRecord {
    /// Probability and normalized output of this branch on `input`, whose
    /// qubits must be the pattern inputs in input order. `None` when the
    /// branch cannot occur.
    pub fn on_input(&self, input: &StateVector, outputs: &[QubitId]) -> Option<(f64, StateVector)> {
        let v = DMatrix::from_column_slice(input.amplitudes().len(), 1, input.amplitudes());
        let out = &self.operator * v;
        let p: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        if p < ZERO_PROB {
            return None;
        }
        let amps = out.iter().map(|a| a / p.sqrt()).collect();
        Some((
            p,
            StateVector::new(outputs.to_vec(), amps).expect("normalized"),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Slot {
    Ref(usize),
    Q(QubitId),
}

const PLUS: [C64; 2] = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)];

/// Below this probability a forced branch is reported as impossible.
const ZERO_PROB: f64 = 1e-14;

fn outcome_of(outcomes: &[(QubitId, bool)], q: QubitId) -> Option<bool> {
    outcomes.iter().rev().find(|(p, _)| *p == q).map(|x| x.1)
}

fn eval(s: &crate::pattern::Signal, outcomes: &[(QubitId, bool)]) -> bool {
    s.eval(|q| outcome_of(outcomes, q))
        .expect("well-formed patterns only reference earlier outcomes")
}

fn pos_or_plus(t: &mut Tensor<Slot>, q: QubitId) -> usize {
    match t.pos(Slot::Q(q)) {
        Some(p) => p,
        None => {
            t.append(Slot::Q(q), PLUS);
            t.width() - 1
        }
    }
}

/// Applies a non-measurement command.
fn apply_unitary(t: &mut Tensor<Slot>, c: &Command, outcomes: &[(QubitId, bool)]) {
    match c {
        Command::Entangle(a, b) => {
            let pa = pos_or_plus(t, *a);
            let pb = pos_or_plus(t, *b);
            t.apply_cz(pa, pb);
        }
        Command::CorrectX { qubit, signal } => {
            let p = pos_or_plus(t, *qubit);
            if eval(signal, outcomes) {
                t.apply_x(p);
            }
        }
        Command::CorrectZ { qubit, signal } => {
            let p = pos_or_plus(t, *qubit);
            if eval(signal, outcomes) {
                t.apply_z(p);
            }
        }
        Command::Measure { .. } => unreachable!("measurements are handled by the caller"),
    }
}

/// Bra for a measurement given the outcomes so far.
fn measure_bra(c: &Command, outcomes: &[(QubitId, bool)], alpha0: Alpha0, s: bool) -> [C64; 2] {
    let Command::Measure {
        angle,
        s_domain,
        t_domain,
        ..
    } = c
    else {
        unreachable!()
    };
    let a = effective_angle(*angle, eval(s_domain, outcomes), eval(t_domain, outcomes));
    measurement_bra(a.radians(alpha0), s)
}

fn finish_outputs(t: &mut Tensor<Slot>, outputs: &[QubitId]) {
    for &q in outputs {
        pos_or_plus(t, q);
    }
}

pub fn run_pattern(
    t: &Pattern,
    input: &StateVector,
    oracle: &Oracle,
    alpha0: Alpha0,
) -> Result<RunResult> {
    t.ensure_well_formed()?;
    let mut a: Vec<QubitId> = input.qubits().to_vec();
    let mut b = t.inputs.clone();
    a.sort();
    b.sort();
    if a != b {
        return Err(Error::InputMismatch(format!(
            "input state is over {:?}, pattern inputs are {:?}",
            input.qubits(),
            t.inputs
        )));
    }
    let mut tensor = Tensor {
        labels: input.qubits().iter().map(|&q| Slot::Q(q)).collect(),
        amps: input.amplitudes().to_vec(),
    };
    let mut rng = match oracle {
        Oracle::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut outcomes: Vec<(QubitId, bool)> = Vec::new();
    let mut probability = 1.0;
    for c in &t.commands {
        let Command::Measure { qubit, .. } = c else {
            apply_unitary(&mut tensor, c, &outcomes);
            continue;
        };
        let p = pos_or_plus(&mut tensor, *qubit);
        let branch = |s: bool| {
            let mut b = tensor.clone();
            b.contract(p, measure_bra(c, &outcomes, alpha0, s));
            let n = b.norm_sqr();
            (b, n)
        };
        let (b0, p0) = branch(false);
        let s = match oracle {
            Oracle::Forced(m) => *m.get(qubit).ok_or(Error::OracleExhausted(*qubit))?,
            Oracle::Sequence(v) => *v
                .get(outcomes.len())
                .ok_or(Error::OracleExhausted(*qubit))?,
            Oracle::Seeded(_) => {
                let r: f64 = rng.as_mut().expect("seeded").gen();
                r >= p0
            }
        };
        let (mut next, ps) = if s { branch(true) } else { (b0, p0) };
        if ps < ZERO_PROB {
            return Err(Error::ZeroProbabilityBranch {
                qubit: *qubit,
                outcome: s,
            });
        }
        next.scale(1.0 / ps.sqrt());
        probability *= ps;
        tensor = next;
        outcomes.push((*qubit, s));
    }
    finish_outputs(&mut tensor, &t.outputs);
    let order: Vec<Slot> = t.outputs.iter().map(|&q| Slot::Q(q)).collect();
    let out = tensor.permuted(&order);
    let state = StateVector::from_tensor(Tensor {
        labels: t.outputs.clone(),
        amps: out.amps,
    });
    Ok(RunResult {
        state,
        outcomes,
        probability,
    })
}

/// Levels of the branch tree that may be split across threads.
const PARALLEL_LEVELS: usize = 6;

type Leaf<'a, R> = dyn Fn(&[(QubitId, bool)], Tensor<Slot>) -> R + Sync + 'a;

struct Dfs<'a, R> {
    t: &'a Pattern,
    alpha0: Alpha0,
    exec: Execution,
    leaf: &'a Leaf<'a, R>,
}

impl<R: Send> Dfs<'_, R> {
    fn run(
        &self,
        mut tensor: Tensor<Slot>,
        mut pc: usize,
        outcomes: Vec<(QubitId, bool)>,
    ) -> Vec<R> {
        let cmds = &self.t.commands;
        while pc < cmds.len() {
            let c = &cmds[pc];
            pc += 1;
            let Command::Measure { qubit, .. } = c else {
                apply_unitary(&mut tensor, c, &outcomes);
                continue;
            };
            let p = pos_or_plus(&mut tensor, *qubit);
            let t1 = tensor.split(
                p,
                measure_bra(c, &outcomes, self.alpha0, false),
                measure_bra(c, &outcomes, self.alpha0, true),
            );
            let mut o0 = outcomes.clone();
            o0.push((*qubit, false));
            let mut o1 = outcomes;
            o1.push((*qubit, true));
            let exec = if o1.len() <= PARALLEL_LEVELS {
                self.exec
            } else {
                Execution::Sequential
            };
            let (mut a, b) = exec.join(|| self.run(tensor, pc, o0), || self.run(t1, pc, o1));
            a.extend(b);
            return a;
        }
        finish_outputs(&mut tensor, &self.t.outputs);
        vec![(self.leaf)(&outcomes, tensor)]
    }
}

fn choi_vector(t: &Pattern) -> Tensor<Slot> {
    let mut tensor = Tensor::scalar(ONE);
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    for (k, &q) in t.inputs.iter().enumerate() {
        tensor.append_pair(Slot::Ref(k), Slot::Q(q), [s, ZERO, ZERO, s]);
    }
    tensor
}

/// Output slots then reference slots: index `o + 2^{|O|}·i`.
fn operator_order(t: &Pattern) -> Vec<Slot> {
    t.outputs
        .iter()
        .map(|&q| Slot::Q(q))
        .chain((0..t.inputs.len()).map(Slot::Ref))
        .collect()
}

fn fold_branches<R: Send>(t: &Pattern, opts: &SimOptions, leaf: &Leaf<'_, R>) -> Result<Vec<R>> {
    t.ensure_well_formed()?;
    let count = t.measured_qubits().len();
    if count > opts.branch_limit {
        return Err(Error::BranchLimit {
            count,
            limit: opts.branch_limit,
        });
    }
    let s = scheduled(t);
    let dfs = Dfs {
        t: &s,
        alpha0: opts.alpha0,
        exec: opts.exec,
        leaf,
    };
    Ok(dfs.run(choi_vector(&s), 0, Vec::new()))
}

/// All `2^k` branches, in a fixed order that does not depend on the
/// execution mode.
pub fn enumerate_branches(t: &Pattern, opts: &SimOptions) -> Result<Vec<BranchRecord>> {
    let order = operator_order(t);
    let n_out = t.outputs.len();
    let d_in = 1usize << t.inputs.len();
    let scale = (d_in as f64).sqrt();
    fold_branches(t, opts, &|outcomes, tensor| {
        let v = tensor.permuted(&order);
        let op = DMatrix::from_fn(1 << n_out, d_in, |o, i| v.amps[o | (i << n_out)] * scale);
        BranchRecord {
            outcomes: outcomes.iter().copied().collect(),
            weight: v.norm_sqr(),
            operator: op,
        }
    })
}

/// Every branch operator is a unit multiple of the first and satisfies
/// `K†K = 2^{−k}·I`.
pub fn check_determinism(t: &Pattern, tol: f64, opts: &SimOptions) -> Result<bool> {
    let branches = enumerate_branches(t, opts)?;
    let k = t.measured_qubits().len();
    let expect = 0.5f64.powi(k as i32);
    let first = &branches[0].operator;
    let d_in = first.ncols();
    for b in &branches {
        let g = b.operator.adjoint() * &b.operator;
        for i in 0..d_in {
            for j in 0..d_in {
                let want = if i == j { expect } else { 0.0 };
                if (g[(i, j)] - C64::new(want, 0.0)).norm() > tol {
                    return Ok(false);
                }
            }
        }
        if !equal_up_to_phase(&b.operator, first, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Process fidelity `Σ_b |tr(U†K_b)|²/d²` with the unitary `u`
/// (`2^{|O|} × 2^{|I|}`); equals 1 iff the pattern's channel is conjugation
/// by `u`.
pub fn pattern_unitary_fidelity(t: &Pattern, u: &DMatrix<C64>, opts: &SimOptions) -> Result<f64> {
    let n_out = t.outputs.len();
    let d_in = 1usize << t.inputs.len();
    if u.nrows() != 1 << n_out || u.ncols() != d_in {
        return Err(Error::DimensionMismatch(
            u.nrows(),
            u.ncols(),
            1 << n_out,
            d_in,
        ));
    }
    let order = operator_order(t);
    let scale = 1.0 / (d_in as f64).sqrt();
    let target: Vec<C64> = (0..(1usize << n_out) * d_in)
        .map(|idx| u[(idx & ((1 << n_out) - 1), idx >> n_out)].conj() * scale)
        .collect();
    let target = Tensor {
        labels: order,
        amps: target,
    };
    // every leaf ends with the same label order, so the target is permuted once
    let aligned: OnceLock<Tensor<Slot>> = OnceLock::new();
    let parts = fold_branches(t, opts, &|_, tensor| {
        let tgt = aligned.get_or_init(|| target.permuted(&tensor.labels));
        let ip: C64 = if tgt.labels == tensor.labels {
            tgt.amps.iter().zip(&tensor.amps).map(|(a, b)| a * b).sum()
        } else {
            let v = tensor.permuted(&target.labels);
            target.amps.iter().zip(&v.amps).map(|(a, b)| a * b).sum()
        };
        ip.norm_sqr()
    })?;
    Ok(parts.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::pattern::Signal;

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn t_h() -> Pattern {
        Pattern::new(
            [q(1), q(2)],
            vec![q(1)],
            vec![q(2)],
            vec![
                Command::Entangle(q(1), q(2)),
                Command::measure(q(1), Angle::ZERO),
                Command::x(q(2), Signal::of([q(1)])),
            ],
        )
    }

    #[test]
    fn t_h_on_zero_gives_plus_with_half_probability() {
        let input = StateVector::zeros(&[q(1)]);
        let forced = Oracle::Forced([(q(1), false)].into_iter().collect());
        let r = run_pattern(&t_h(), &input, &forced, Alpha0::default()).unwrap();
        assert!((r.probability - 0.5).abs() < 1e-12);
        assert!(r
            .state
            .equal_up_to_phase(&StateVector::plus(&[q(2)]), 1e-12));
    }

    #[test]
    fn empty_pattern_is_identity() {
        let ids = [q(1), q(2)];
        let s = StateVector::random(&ids, 1);
        let r = run_pattern(
            &Pattern::identity(&ids),
            &s,
            &Oracle::Seeded(0),
            Alpha0::default(),
        )
        .unwrap();
        assert_eq!(r.probability, 1.0);
        assert!((r.state.inner(&s).unwrap() - ONE).norm() < 1e-12);
    }

    #[test]
    fn missing_forced_outcome_is_reported() {
        let input = StateVector::zeros(&[q(1)]);
        let e = run_pattern(&t_h(), &input, &Oracle::Sequence(vec![]), Alpha0::default());
        assert!(matches!(e, Err(Error::OracleExhausted(_))));
    }

    #[test]
    fn impossible_forced_branch_is_reported() {
        // measuring |+> at angle 0 never yields 1
        let t = Pattern::new(
            [q(1)],
            vec![q(1)],
            vec![],
            vec![Command::measure(q(1), Angle::ZERO)],
        );
        let input = StateVector::plus(&[q(1)]);
        let e = run_pattern(&t, &input, &Oracle::Sequence(vec![true]), Alpha0::default());
        assert!(matches!(e, Err(Error::ZeroProbabilityBranch { .. })));
    }

    #[test]
    fn seeded_runs_repeat() {
        let input = StateVector::random(&[q(1)], 5);
        let a = run_pattern(&t_h(), &input, &Oracle::Seeded(9), Alpha0::default()).unwrap();
        let b = run_pattern(&t_h(), &input, &Oracle::Seeded(9), Alpha0::default()).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.state, b.state);
    }

    #[test]
    fn branches_of_t_h_are_trace_preserving_and_deterministic() {
        let opts = SimOptions::default();
        let b = enumerate_branches(&t_h(), &opts).unwrap();
        assert_eq!(b.len(), 2);
        let sum = b.iter().fold(DMatrix::from_element(2, 2, ZERO), |acc, r| {
            acc + r.operator.adjoint() * &r.operator
        });
        assert!((sum - DMatrix::identity(2, 2))
            .iter()
            .all(|x| x.norm() < 1e-12));
        assert!(check_determinism(&t_h(), 1e-9, &opts).unwrap());
        let h = DMatrix::from_fn(2, 2, |i, j| {
            C64::new(
                if i == 1 && j == 1 {
                    -FRAC_1_SQRT_2
                } else {
                    FRAC_1_SQRT_2
                },
                0.0,
            )
        });
        let f = pattern_unitary_fidelity(&t_h(), &h, &opts).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uncorrected_measurement_is_not_deterministic() {
        let t = Pattern::new(
            [q(1), q(2)],
            vec![q(1)],
            vec![q(2)],
            vec![
                Command::Entangle(q(1), q(2)),
                Command::measure(q(1), Angle::ZERO),
            ],
        );
        assert!(!check_determinism(&t, 1e-9, &SimOptions::default()).unwrap());
    }

    #[test]
    fn branch_limit_refuses() {
        let opts = SimOptions {
            branch_limit: 0,
            ..SimOptions::default()
        };
        assert!(matches!(
            enumerate_branches(&t_h(), &opts),
            Err(Error::BranchLimit { count: 1, limit: 0 })
        ));
    }
}
