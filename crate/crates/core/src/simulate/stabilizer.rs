//! Exact channel comparison for Clifford patterns and circuits through the
//! stabilizer group of their Choi state. Measurements are deferred: a
//! measured qubit keeps its outcome in the standard basis and corrections
//! become controlled Paulis, so no branch is ever enumerated.

use std::collections::HashMap;

use crate::circuit::{Circuit, Gate};
use crate::error::Result;
use crate::pattern::{Command, Pattern, QubitId, Signal};

#[derive(Debug, Clone)]
struct Row {
    x: Vec<u64>,
    z: Vec<u64>,
    minus: bool,
}

fn get(v: &[u64], i: usize) -> bool {
    v[i / 64] >> (i % 64) & 1 == 1
}

fn flip(v: &mut [u64], i: usize) {
    v[i / 64] ^= 1 << (i % 64);
}

fn set(v: &mut [u64], i: usize, b: bool) {
    if get(v, i) != b {
        flip(v, i);
    }
}

impl Row {
    fn identity(n: usize) -> Self {
        let w = n.div_ceil(64);
        Row {
            x: vec![0; w],
            z: vec![0; w],
            minus: false,
        }
    }

    /// `self ← other·self`; both must commute.
    fn mul_by(&mut self, other: &Row, n: usize) {
        // exponent of i, as in Aaronson–Gottesman
        let mut e: i32 = 2 * (self.minus as i32 + other.minus as i32);
        for j in 0..n {
            let (x1, z1) = (get(&other.x, j), get(&other.z, j));
            let (x2, z2) = (get(&self.x, j) as i32, get(&self.z, j) as i32);
            e += match (x1, z1) {
                (false, false) => 0,
                (true, true) => z2 - x2,
                (true, false) => z2 * (2 * x2 - 1),
                (false, true) => x2 * (1 - 2 * z2),
            };
        }
        self.minus = e.rem_euclid(4) == 2;
        for (a, b) in self.x.iter_mut().zip(&other.x) {
            *a ^= b;
        }
        for (a, b) in self.z.iter_mut().zip(&other.z) {
            *a ^= b;
        }
    }
}

struct Tableau {
    n: usize,
    rows: Vec<Row>,
}

impl Tableau {
    fn new(n: usize) -> Self {
        Tableau {
            n,
            rows: Vec::with_capacity(n),
        }
    }

    fn push(&mut self, paulis: &[(usize, char)]) {
        let mut r = Row::identity(self.n);
        for &(q, p) in paulis {
            match p {
                'X' => flip(&mut r.x, q),
                'Z' => flip(&mut r.z, q),
                _ => unreachable!(),
            }
        }
        self.rows.push(r);
    }

    fn h(&mut self, a: usize) {
        for r in &mut self.rows {
            let (x, z) = (get(&r.x, a), get(&r.z, a));
            r.minus ^= x & z;
            set(&mut r.x, a, z);
            set(&mut r.z, a, x);
        }
    }

    fn s(&mut self, a: usize) {
        for r in &mut self.rows {
            let x = get(&r.x, a);
            r.minus ^= x & get(&r.z, a);
            if x {
                flip(&mut r.z, a);
            }
        }
    }

    fn cnot(&mut self, a: usize, b: usize) {
        for r in &mut self.rows {
            let (xa, za, xb, zb) = (get(&r.x, a), get(&r.z, a), get(&r.x, b), get(&r.z, b));
            r.minus ^= xa & zb & !(xb ^ za);
            if xa {
                flip(&mut r.x, b);
            }
            if zb {
                flip(&mut r.z, a);
            }
        }
    }

    fn cz(&mut self, a: usize, b: usize) {
        self.h(b);
        self.cnot(a, b);
        self.h(b);
    }

    fn x(&mut self, a: usize) {
        for r in &mut self.rows {
            r.minus ^= get(&r.z, a);
        }
    }

    fn z(&mut self, a: usize) {
        for r in &mut self.rows {
            r.minus ^= get(&r.x, a);
        }
    }

    /// Canonical generators of the group restricted to `kept`, in that order.
    fn reduced(mut self, kept: &[usize]) -> Vec<(Vec<bool>, bool)> {
        let n = self.n;
        let mut keep = vec![false; n];
        for &k in kept {
            keep[k] = true;
        }
        // eliminate the traced columns; rows left with no support there
        // generate the reduced state's group
        let mut free: Vec<bool> = vec![true; self.rows.len()];
        for q in (0..n).filter(|&q| !keep[q]) {
            for bit in [true, false] {
                let at = |r: &Row| if bit { get(&r.x, q) } else { get(&r.z, q) };
                let Some(p) = (0..self.rows.len()).find(|&i| free[i] && at(&self.rows[i])) else {
                    continue;
                };
                free[p] = false;
                let pivot = self.rows[p].clone();
                for (row, _) in self
                    .rows
                    .iter_mut()
                    .zip(&free)
                    .filter(|(r, f)| **f && at(r))
                {
                    row.mul_by(&pivot, n);
                }
            }
        }
        let mut rows: Vec<Row> = self
            .rows
            .into_iter()
            .zip(free)
            .filter(|(_, f)| *f)
            .map(|(r, _)| r)
            .collect();
        // full reduction on the kept columns makes the generator set unique
        let mut done = 0;
        for &q in kept {
            for bit in [true, false] {
                let at = |r: &Row| if bit { get(&r.x, q) } else { get(&r.z, q) };
                let Some(p) = (done..rows.len()).find(|&i| at(&rows[i])) else {
                    continue;
                };
                rows.swap(done, p);
                let pivot = rows[done].clone();
                for (i, r) in rows.iter_mut().enumerate() {
                    if i != done && at(r) {
                        r.mul_by(&pivot, n);
                    }
                }
                done += 1;
            }
        }
        rows.into_iter()
            .filter(|r| kept.iter().any(|&q| get(&r.x, q) || get(&r.z, q)))
            .map(|r| {
                let bits = kept
                    .iter()
                    .flat_map(|&q| [get(&r.x, q), get(&r.z, q)])
                    .collect();
                (bits, r.minus)
            })
            .collect()
    }
}

/// Stabilizer group of a Clifford channel's Choi state, on the outputs
/// followed by one reference per input. Equal groups mean equal channels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerChoi {
    pub inputs: usize,
    pub outputs: usize,
    generators: Vec<(Vec<bool>, bool)>,
}

impl StabilizerChoi {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Line index per register qubit, references after them.
fn layout(
    register: impl Iterator<Item = QubitId>,
    inputs: &[QubitId],
    fresh: char,
) -> (HashMap<QubitId, usize>, Tableau) {
    let ids: HashMap<QubitId, usize> = register.enumerate().map(|(i, q)| (q, i)).collect();
    let n = ids.len() + inputs.len();
    let mut tab = Tableau::new(n);
    let mut sorted: Vec<(&QubitId, &usize)> = ids.iter().collect();
    sorted.sort();
    for (q, &i) in sorted {
        if !inputs.contains(q) {
            tab.push(&[(i, fresh)]);
        }
    }
    for (k, q) in inputs.iter().enumerate() {
        let (r, i) = (ids.len() + k, ids[q]);
        tab.push(&[(r, 'X'), (i, 'X')]);
        tab.push(&[(r, 'Z'), (i, 'Z')]);
    }
    (ids, tab)
}

fn finish(
    tab: Tableau,
    ids: &HashMap<QubitId, usize>,
    inputs: usize,
    outputs: &[QubitId],
) -> StabilizerChoi {
    let base = ids.len();
    let kept: Vec<usize> = outputs
        .iter()
        .map(|q| ids[q])
        .chain(base..base + inputs)
        .collect();
    StabilizerChoi {
        inputs,
        outputs: outputs.len(),
        generators: tab.reduced(&kept),
    }
}

fn controlled(
    tab: &mut Tableau,
    ids: &HashMap<QubitId, usize>,
    s: &Signal,
    target: usize,
    pauli: char,
) {
    for c in s.outcomes() {
        match pauli {
            'X' => tab.cnot(ids[c], target),
            _ => tab.cz(ids[c], target),
        }
    }
    if s.constant() {
        match pauli {
            'X' => tab.x(target),
            _ => tab.z(target),
        }
    }
}

/// `None` when some measurement angle is not a multiple of `π/2`.
pub fn pattern_stabilizer_choi(t: &Pattern) -> Result<Option<StabilizerChoi>> {
    t.ensure_well_formed()?;
    let mut quarters = Vec::new();
    for c in &t.commands {
        if let Command::Measure { angle, .. } = c {
            match angle.quarter_turns() {
                Some(k) => quarters.push(k),
                None => return Ok(None),
            }
        }
    }
    let (ids, mut tab) = layout(t.register.iter().copied(), &t.inputs, 'X');
    let mut quarters = quarters.into_iter();
    for c in &t.commands {
        match c {
            Command::Entangle(a, b) => tab.cz(ids[a], ids[b]),
            Command::Measure {
                qubit,
                s_domain,
                t_domain,
                ..
            } => {
                let k = quarters.next().expect("counted above");
                let a = ids[qubit];
                // at these angles the s-dependency is a flip iff k is odd
                let mut flip = t_domain.clone();
                if k % 2 == 1 {
                    flip.xor_assign(s_domain);
                }
                controlled(&mut tab, &ids, &flip, a, 'Z');
                for _ in 0..(4 - k) % 4 {
                    tab.s(a);
                }
                tab.h(a);
            }
            Command::CorrectX { qubit, signal } => {
                controlled(&mut tab, &ids, signal, ids[qubit], 'X')
            }
            Command::CorrectZ { qubit, signal } => {
                controlled(&mut tab, &ids, signal, ids[qubit], 'Z')
            }
        }
    }
    Ok(Some(finish(tab, &ids, t.inputs.len(), &t.outputs)))
}

/// `None` when some rotation is not a multiple of `π/2`.
pub fn circuit_stabilizer_choi(c: &Circuit) -> Result<Option<StabilizerChoi>> {
    c.validate()?;
    if c.gates
        .iter()
        .any(|g| matches!(g, Gate::RotZ(_, a) if a.quarter_turns().is_none()))
    {
        return Ok(None);
    }
    let (ids, mut tab) = layout(c.register.iter().copied(), &c.inputs, 'Z');
    for g in &c.gates {
        match g {
            Gate::Hadamard(q) => tab.h(ids[q]),
            Gate::RotZ(q, a) => {
                for _ in 0..a.quarter_turns().expect("checked above") {
                    tab.s(ids[q]);
                }
            }
            Gate::ControlledZ(a, b) => tab.cz(ids[a], ids[b]),
            Gate::FanOut { control, targets } => {
                for t in targets {
                    tab.cnot(ids[control], ids[t]);
                }
            }
        }
    }
    Ok(Some(finish(tab, &ids, c.inputs.len(), &c.outputs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angle::Angle;
    use crate::random::random_circuit;
    use crate::simulate::{channels_equal, circuit_channel};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    fn one(g: Gate) -> Circuit {
        Circuit::on(&[q(1)], vec![g])
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
    fn hadamard_gadget_matches_h_not_z() {
        let t = pattern_stabilizer_choi(&t_h()).unwrap().unwrap();
        let h = circuit_stabilizer_choi(&one(Gate::Hadamard(q(1))))
            .unwrap()
            .unwrap();
        let z = circuit_stabilizer_choi(&one(Gate::RotZ(q(1), Angle::PI)))
            .unwrap()
            .unwrap();
        assert_eq!(t.rank(), 2);
        assert_eq!(t, h);
        assert_ne!(t, z);
    }

    #[test]
    fn missing_correction_gives_a_mixed_choi_state() {
        let mut t = t_h();
        t.commands.pop();
        let s = pattern_stabilizer_choi(&t).unwrap().unwrap();
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn non_clifford_angle_is_declined() {
        let c = one(Gate::RotZ(q(1), Angle::pi_fraction(1, 4)));
        assert!(circuit_stabilizer_choi(&c).unwrap().is_none());
    }

    fn clifford(mut c: Circuit) -> Circuit {
        for g in &mut c.gates {
            if let Gate::RotZ(_, a) = g {
                *a = Angle::pi_fraction(a.numerator() % 4, 2);
            }
        }
        c
    }

    #[test]
    fn agrees_with_dense_comparison_on_random_clifford_circuits() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (mut same, mut differ) = (0, 0);
        for _ in 0..150 {
            let a = clifford(random_circuit(&mut rng, 2, 2));
            let b = clifford(random_circuit(&mut rng, 2, 2));
            let dense = channels_equal(
                &circuit_channel(&a, Default::default()).unwrap(),
                &circuit_channel(&b, Default::default()).unwrap(),
                1e-9,
            )
            .unwrap()
            .equal;
            let stab = circuit_stabilizer_choi(&a).unwrap() == circuit_stabilizer_choi(&b).unwrap();
            assert_eq!(dense, stab, "{a:?} vs {b:?}");
            if dense {
                same += 1;
            } else {
                differ += 1;
            }
        }
        assert!(same > 0 && differ > 0, "{same} {differ}");
    }
}
