//! Labelled dense amplitude vectors. Bit `p` of an index belongs to
//! `labels[p]`; appended labels take the most significant position.

use num_complex::Complex64 as C64;

pub(crate) type Mat2 = [[C64; 2]; 2];

#[derive(Debug, Clone)]
pub(crate) struct Tensor<L> {
    pub labels: Vec<L>,
    pub amps: Vec<C64>,
}

impl<L: PartialEq + Copy> Tensor<L> {
    pub fn scalar(v: C64) -> Self {
        Tensor {
            labels: Vec::new(),
            amps: vec![v],
        }
    }

    pub fn width(&self) -> usize {
        self.labels.len()
    }

    pub fn pos(&self, l: L) -> Option<usize> {
        self.labels.iter().position(|&x| x == l)
    }

    pub fn append(&mut self, l: L, amp: [C64; 2]) {
        let n = self.amps.len();
        let mut out = Vec::with_capacity(2 * n);
        out.extend(self.amps.iter().map(|a| a * amp[0]));
        out.extend(self.amps.iter().map(|a| a * amp[1]));
        self.amps = out;
        self.labels.push(l);
    }

    /// Appends `l1` then `l2` with joint amplitudes indexed `b1 + 2·b2`.
    pub fn append_pair(&mut self, l1: L, l2: L, amp: [C64; 4]) {
        let n = self.amps.len();
        let mut out = Vec::with_capacity(4 * n);
        for a in amp {
            out.extend(self.amps.iter().map(|x| x * a));
        }
        self.amps = out;
        self.labels.push(l1);
        self.labels.push(l2);
    }

    pub fn apply_1q(&mut self, p: usize, m: &Mat2) {
        let bit = 1usize << p;
        let n = self.amps.len();
        let mut i = 0;
        while i < n {
            if i & bit != 0 {
                i += bit;
                continue;
            }
            let a0 = self.amps[i];
            let a1 = self.amps[i | bit];
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            i += 1;
        }
    }

    /// Applies `m` at `p` on every index where the parity of the bits in
    /// `mask`, XOR `flip`, is 1. `mask` must not contain `p`.
    pub fn apply_1q_if(&mut self, p: usize, m: &Mat2, mask: usize, flip: bool) {
        let bit = 1usize << p;
        debug_assert!(mask & bit == 0);
        let n = self.amps.len();
        for i in 0..n {
            if i & bit != 0 {
                continue;
            }
            if ((i & mask).count_ones() & 1 == 1) == flip {
                continue;
            }
            let a0 = self.amps[i];
            let a1 = self.amps[i | bit];
            self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
            self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
        }
    }

    pub fn apply_x(&mut self, p: usize) {
        let bit = 1usize << p;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                self.amps.swap(i, i | bit);
            }
        }
    }

    pub fn apply_z(&mut self, p: usize) {
        let bit = 1usize << p;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a = -*a;
            }
        }
    }

    /// Contracts position `p` with two covectors at once; `self` is left
    /// with the first result.
    pub fn split(&mut self, p: usize, bra0: [C64; 2], bra1: [C64; 2]) -> Tensor<L> {
        let bit = 1usize << p;
        let low = bit - 1;
        let n = self.amps.len() / 2;
        let mut out0 = Vec::with_capacity(n);
        let mut out1 = Vec::with_capacity(n);
        for j in 0..n {
            let i0 = ((j & !low) << 1) | (j & low);
            let (a0, a1) = (self.amps[i0], self.amps[i0 | bit]);
            out0.push(bra0[0] * a0 + bra0[1] * a1);
            out1.push(bra1[0] * a0 + bra1[1] * a1);
        }
        self.amps = out0;
        self.labels.remove(p);
        Tensor {
            labels: self.labels.clone(),
            amps: out1,
        }
    }

    /// Keeps only entries where bits `p1` and `p2` agree and replaces the
    /// two positions by one new label `l` carrying the common value.
    pub fn diagonalize_pair(&mut self, p1: usize, p2: usize, l: L) {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let mut a = self.clone();
        a.contract_pair(p1, p2, [one, zero, zero, zero]);
        self.contract_pair(p1, p2, [zero, zero, zero, one]);
        let mut amps = a.amps;
        amps.append(&mut self.amps);
        self.amps = amps;
        self.labels.push(l);
    }

    pub fn apply_cz(&mut self, p: usize, q: usize) {
        let mask = (1usize << p) | (1usize << q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a = -*a;
            }
        }
    }

    /// Contracts position `p` with the covector `bra` and drops it.
    pub fn contract(&mut self, p: usize, bra: [C64; 2]) {
        let bit = 1usize << p;
        let low = bit - 1;
        let n = self.amps.len() / 2;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let i0 = ((j & !low) << 1) | (j & low);
            out.push(bra[0] * self.amps[i0] + bra[1] * self.amps[i0 | bit]);
        }
        self.amps = out;
        self.labels.remove(p);
    }

    /// Contracts positions `p1`, `p2` with `bra[b1 + 2·b2]` and drops both.
    pub fn contract_pair(&mut self, p1: usize, p2: usize, bra: [C64; 4]) {
        let (lo, hi) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
        let b1 = 1usize << p1;
        let b2 = 1usize << p2;
        let n = self.amps.len() / 4;
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            // insert zero bits at `lo` then `hi`
            let mut i = ((j >> lo) << (lo + 1)) | (j & ((1 << lo) - 1));
            i = ((i >> hi) << (hi + 1)) | (i & ((1 << hi) - 1));
            let mut acc = C64::new(0.0, 0.0);
            for (k, w) in bra.iter().enumerate() {
                if *w == C64::new(0.0, 0.0) {
                    continue;
                }
                let mut idx = i;
                if k & 1 != 0 {
                    idx |= b1;
                }
                if k & 2 != 0 {
                    idx |= b2;
                }
                acc += w * self.amps[idx];
            }
            out.push(acc);
        }
        self.amps = out;
        let (first, second) = (hi, lo);
        self.labels.remove(first);
        self.labels.remove(second);
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn scale(&mut self, f: f64) {
        for a in &mut self.amps {
            *a *= f;
        }
    }

    /// Reorders positions so that `order[k]` sits at position `k`.
    pub fn permuted(&self, order: &[L]) -> Tensor<L> {
        let n = self.labels.len();
        assert_eq!(order.len(), n);
        let src: Vec<usize> = order
            .iter()
            .map(|&l| self.pos(l).expect("label present"))
            .collect();
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (j, o) in out.iter_mut().enumerate() {
            let mut i = 0usize;
            for (k, &s) in src.iter().enumerate() {
                if j >> k & 1 == 1 {
                    i |= 1 << s;
                }
            }
            *o = self.amps[i];
        }
        Tensor {
            labels: order.to_vec(),
            amps: out,
        }
    }
}
