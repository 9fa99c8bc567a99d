//! Channel of a pattern from its Choi state, evolved as a doubled
//! (ket ⊗ conjugate-bra) tensor. Measured qubits collapse into classical
//! bits that stay live only while later signals still read them.

use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::channel::Channel;
use super::schedule::scheduled;
use super::tensor::{Mat2, Tensor};
use super::{conj2, mat_x, mat_z, measurement_basis, SimOptions, FRAC_1_SQRT_2, ONE, ZERO};
use crate::error::{Error, Result};
use crate::pattern::{Command, Pattern, QubitId, Signal};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum D {
    RefRow(usize),
    RefCol(usize),
    Row(QubitId),
    Col(QubitId),
    Bit(QubitId),
}

struct Engine {
    t: Tensor<D>,
    opts: SimOptions,
    /// Remaining signal reads per measured qubit.
    reads: HashMap<QubitId, usize>,
    live_bits: usize,
}

const PLUS: [C64; 2] = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)];

impl Engine {
    fn pos(&self, l: D) -> usize {
        self.t.pos(l).expect("label present")
    }

    fn ensure(&mut self, q: QubitId) -> Result<()> {
        if self.t.pos(D::Row(q)).is_some() {
            return Ok(());
        }
        let width = self.t.width() + 2;
        if width > self.opts.max_width {
            return Err(Error::RegisterTooLarge {
                width,
                limit: self.opts.max_width,
            });
        }
        self.t.append(D::Row(q), PLUS);
        self.t.append(D::Col(q), PLUS);
        Ok(())
    }

    fn condition(&self, s: &Signal) -> (usize, bool) {
        let mask = s
            .outcomes()
            .iter()
            .map(|&q| 1usize << self.pos(D::Bit(q)))
            .fold(0, |a, b| a | b);
        (mask, s.constant())
    }

    /// `m` on the ket side and `m*` on the bra side when `s` evaluates to 1.
    fn apply_if(&mut self, q: QubitId, m: &Mat2, s: &Signal) {
        if s.is_trivial() {
            return;
        }
        let (mask, flip) = self.condition(s);
        let (r, c) = (self.pos(D::Row(q)), self.pos(D::Col(q)));
        self.t.apply_1q_if(r, m, mask, flip);
        self.t.apply_1q_if(c, &conj2(m), mask, flip);
    }

    fn apply(&mut self, q: QubitId, m: &Mat2) {
        let (r, c) = (self.pos(D::Row(q)), self.pos(D::Col(q)));
        self.t.apply_1q(r, m);
        self.t.apply_1q(c, &conj2(m));
    }

    fn consume(&mut self, s: &Signal) {
        for &q in s.outcomes() {
            let n = self.reads.get_mut(&q).expect("counted");
            *n -= 1;
            if *n == 0 {
                self.trace_bit(q);
            }
        }
    }

    fn trace_bit(&mut self, q: QubitId) {
        let p = self.pos(D::Bit(q));
        self.t.contract(p, [ONE, ONE]);
        self.live_bits -= 1;
    }

    fn step(&mut self, c: &Command) -> Result<()> {
        for q in c.acted() {
            self.ensure(q)?;
        }
        match c {
            Command::Entangle(a, b) => {
                let (ra, rb) = (self.pos(D::Row(*a)), self.pos(D::Row(*b)));
                self.t.apply_cz(ra, rb);
                let (ca, cb) = (self.pos(D::Col(*a)), self.pos(D::Col(*b)));
                self.t.apply_cz(ca, cb);
            }
            Command::CorrectX { qubit, signal } => {
                self.apply_if(*qubit, &mat_x(), signal);
                self.consume(signal);
            }
            Command::CorrectZ { qubit, signal } => {
                self.apply_if(*qubit, &mat_z(), signal);
                self.consume(signal);
            }
            Command::Measure {
                qubit,
                angle,
                s_domain,
                t_domain,
            } => {
                // ^t[M^a]^s = M^a X^s Z^t
                self.apply_if(*qubit, &mat_z(), t_domain);
                self.apply_if(*qubit, &mat_x(), s_domain);
                self.apply(*qubit, &measurement_basis(angle.radians(self.opts.alpha0)));
                let (r, col) = (self.pos(D::Row(*qubit)), self.pos(D::Col(*qubit)));
                self.t.diagonalize_pair(r, col, D::Bit(*qubit));
                self.live_bits += 1;
                self.consume(s_domain);
                self.consume(t_domain);
                if self.live_bits > self.opts.branch_limit {
                    return Err(Error::BranchLimit {
                        count: self.live_bits,
                        limit: self.opts.branch_limit,
                    });
                }
                if self.reads.get(qubit).copied().unwrap_or(0) == 0 {
                    self.reads.insert(*qubit, 0);
                    self.trace_bit(*qubit);
                }
            }
        }
        Ok(())
    }
}

pub fn pattern_channel(t: &Pattern) -> Result<Channel> {
    pattern_channel_with(t, &SimOptions::default())
}

/// `branch_limit` bounds the number of measurement outcomes that are
/// simultaneously awaiting a later read.
pub fn pattern_channel_with(t: &Pattern, opts: &SimOptions) -> Result<Channel> {
    t.ensure_well_formed()?;
    let t = scheduled(t);
    let n_in = t.inputs.len();
    let base = 2 * (n_in + t.outputs.len());
    if base > opts.max_width {
        return Err(Error::RegisterTooLarge {
            width: base,
            limit: opts.max_width,
        });
    }
    let mut reads: HashMap<QubitId, usize> = HashMap::new();
    for c in &t.commands {
        for s in c.signals() {
            for &q in s.outcomes() {
                *reads.entry(q).or_default() += 1;
            }
        }
    }
    let mut tensor = Tensor::scalar(ONE);
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    for (k, &q) in t.inputs.iter().enumerate() {
        tensor.append_pair(D::RefRow(k), D::Row(q), [s, ZERO, ZERO, s]);
        tensor.append_pair(D::RefCol(k), D::Col(q), [s, ZERO, ZERO, s]);
    }
    let mut e = Engine {
        t: tensor,
        opts: *opts,
        reads,
        live_bits: 0,
    };
    for c in &t.commands {
        e.step(c)?;
    }
    for &q in &t.outputs {
        e.ensure(q)?;
    }
    let n_out = t.outputs.len();
    let order: Vec<D> = t
        .outputs
        .iter()
        .map(|&q| D::Row(q))
        .chain((0..n_in).map(D::RefRow))
        .chain(t.outputs.iter().map(|&q| D::Col(q)))
        .chain((0..n_in).map(D::RefCol))
        .collect();
    let v = e.t.permuted(&order);
    let dim = 1usize << (n_out + n_in);
    let scale = (1usize << n_in) as f64;
    let choi = DMatrix::from_fn(dim, dim, |r, c| v.amps[r + c * dim] * scale);
    Ok(Channel {
        inputs: t.inputs.clone(),
        outputs: t.outputs.clone(),
        choi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::simulate::{channels_equal, mat_h};

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn m2(m: Mat2) -> DMatrix<C64> {
        DMatrix::from_fn(2, 2, |i, j| m[i][j])
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
    fn t_h_channel_is_hadamard() {
        let ch = pattern_channel(&t_h()).unwrap();
        let h = Channel::from_operator(vec![q(1)], vec![q(2)], &m2(mat_h()));
        let c = channels_equal(&ch, &h, 1e-9).unwrap();
        assert!(c.equal, "distance {}", c.distance);
        assert!(ch.is_trace_preserving(1e-9));
    }

    #[test]
    fn empty_pattern_is_identity_channel() {
        let ids = [q(1), q(2)];
        let ch = pattern_channel(&Pattern::identity(&ids)).unwrap();
        assert!(
            channels_equal(&ch, &Channel::identity(&ids), 1e-12)
                .unwrap()
                .equal
        );
    }

    #[test]
    fn entangle_only_pattern_is_cz() {
        let t = Pattern::new(
            [q(1), q(2)],
            vec![q(1), q(2)],
            vec![q(1), q(2)],
            vec![Command::Entangle(q(1), q(2))],
        );
        let mut cz = DMatrix::<C64>::identity(4, 4);
        cz[(3, 3)] = -ONE;
        let want = Channel::from_operator(t.inputs.clone(), t.outputs.clone(), &cz);
        assert!(
            channels_equal(&pattern_channel(&t).unwrap(), &want, 1e-12)
                .unwrap()
                .equal
        );
    }

    #[test]
    fn agrees_with_branch_kraus_sum() {
        let t = t_h();
        let opts = SimOptions::default();
        let ks: Vec<_> = crate::simulate::enumerate_branches(&t, &opts)
            .unwrap()
            .into_iter()
            .map(|b| b.operator)
            .collect();
        let k = Channel::from_kraus(t.inputs.clone(), t.outputs.clone(), &ks);
        assert!(
            channels_equal(&pattern_channel(&t).unwrap(), &k, 1e-12)
                .unwrap()
                .equal
        );
    }
}
