use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tensor::Tensor;
use super::{ONE, ZERO};
use crate::error::{Error, Result};
use crate::pattern::QubitId;

/// Pure state over an explicit qubit order; `qubits[k]` is bit `k` of the
/// amplitude index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: Vec<QubitId>,
    amps: Vec<C64>,
}

const NORM_TOL: f64 = 1e-10;

impl StateVector {
    pub fn new(qubits: Vec<QubitId>, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1usize << qubits.len() {
            return Err(Error::InputMismatch(format!(
                "{} amplitudes for {} qubits",
                amps.len(),
                qubits.len()
            )));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(q) = qubits.iter().find(|q| !seen.insert(**q)) {
            return Err(Error::InputMismatch(format!("qubit {q} listed twice")));
        }
        let s = StateVector { qubits, amps };
        let n = s.norm_sqr();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::InputMismatch(format!("state has squared norm {n}")));
        }
        Ok(s)
    }

    /// Computational basis state; bit `k` of `index` is qubit `k`.
    pub fn basis(qubits: &[QubitId], index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << qubits.len()];
        amps[index] = ONE;
        StateVector {
            qubits: qubits.to_vec(),
            amps,
        }
    }

    pub fn zeros(qubits: &[QubitId]) -> Self {
        Self::basis(qubits, 0)
    }

    pub fn plus(qubits: &[QubitId]) -> Self {
        let d = 1usize << qubits.len();
        let a = C64::new(1.0 / (d as f64).sqrt(), 0.0);
        StateVector {
            qubits: qubits.to_vec(),
            amps: vec![a; d],
        }
    }

    /// Product state from normalized single-qubit amplitudes.
    pub fn product(qubits: &[QubitId], factors: &[[C64; 2]]) -> Self {
        assert_eq!(qubits.len(), factors.len());
        let mut t: Tensor<QubitId> = Tensor::scalar(ONE);
        for (&q, f) in qubits.iter().zip(factors) {
            t.append(q, *f);
        }
        Self::from_tensor(t)
    }

    /// Product state from one of `0 1 + -` per qubit.
    pub fn from_labels(qubits: &[QubitId], labels: &str) -> Result<Self> {
        if labels.chars().count() != qubits.len() {
            return Err(Error::InputMismatch(format!(
                "{} labels for {} qubits",
                labels.chars().count(),
                qubits.len()
            )));
        }
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let factors = labels
            .chars()
            .map(|ch| match ch {
                '0' => Ok([ONE, ZERO]),
                '1' => Ok([ZERO, ONE]),
                '+' => Ok([h, h]),
                '-' => Ok([h, -h]),
                _ => Err(Error::InputMismatch(format!(
                    "bad state label `{ch}`, expected 0 1 + -"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::product(qubits, &factors))
    }

    /// Seeded pseudo-random normalized state.
    pub fn random(qubits: &[QubitId], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut amps: Vec<C64> = (0..1usize << qubits.len())
            .map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= n;
        }
        StateVector {
            qubits: qubits.to_vec(),
            amps,
        }
    }

    pub fn qubits(&self) -> &[QubitId] {
        &self.qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    /// Amplitudes to four decimals with the global phase fixed so that the
    /// first amplitude of largest modulus is real and positive.
    pub fn fingerprint(&self) -> String {
        let lead = self.amps.iter().copied().fold(ZERO, |best, a| {
            if a.norm() > best.norm() + 1e-9 {
                a
            } else {
                best
            }
        });
        let phase = if lead.norm() > 0.0 {
            lead.conj() / lead.norm()
        } else {
            ONE
        };
        let r = |x: f64| {
            let v = (x * 1e4).round() / 1e4;
            if v == 0.0 {
                0.0
            } else {
                v
            }
        };
        let parts: Vec<String> = self
            .amps
            .iter()
            .map(|a| {
                let a = a * phase;
                let (re, im) = (r(a.re), r(a.im));
                if im == 0.0 {
                    format!("{re:.4}")
                } else {
                    format!("{re:.4}{im:+.4}i")
                }
            })
            .collect();
        format!("[{}]", parts.join(","))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// The same state with qubits listed in `order`.
    pub fn reordered(&self, order: &[QubitId]) -> Result<Self> {
        let mut a = order.to_vec();
        let mut b = self.qubits.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(Error::InputMismatch(
                "reordering must use the same qubit set".into(),
            ));
        }
        Ok(Self::from_tensor(self.to_tensor().permuted(order)))
    }

    /// `⟨self|other⟩` after aligning qubit order.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        let o = other.reordered(&self.qubits)?;
        Ok(self
            .amps
            .iter()
            .zip(&o.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn equal_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        match self.fidelity(other) {
            Ok(f) => (1.0 - f).abs() <= tol,
            Err(_) => false,
        }
    }

    pub(crate) fn to_tensor(&self) -> Tensor<QubitId> {
        Tensor {
            labels: self.qubits.clone(),
            amps: self.amps.clone(),
        }
    }

    pub(crate) fn from_tensor(t: Tensor<QubitId>) -> Self {
        StateVector {
            qubits: t.labels,
            amps: t.amps,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: u32) -> QubitId {
        QubitId(v)
    }

    #[test]
    fn rejects_unnormalized_and_wrong_length() {
        assert!(StateVector::new(vec![q(1)], vec![ONE, ONE]).is_err());
        assert!(StateVector::new(vec![q(1)], vec![ONE]).is_err());
        assert!(StateVector::new(vec![q(1)], vec![ZERO, ONE]).is_ok());
    }

    #[test]
    fn reorder_preserves_inner_product() {
        let s = StateVector::random(&[q(1), q(2), q(3)], 7);
        let r = s.reordered(&[q(3), q(1), q(2)]).unwrap();
        assert!((s.inner(&r).unwrap() - ONE).norm() < 1e-12);
        assert_ne!(s.amplitudes(), r.amplitudes());
    }

    #[test]
    fn random_is_reproducible() {
        let a = StateVector::random(&[q(1), q(2)], 3);
        let b = StateVector::random(&[q(1), q(2)], 3);
        assert_eq!(a, b);
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fingerprint_ignores_global_phase() {
        let a = StateVector::plus(&[q(1)]);
        let i = C64::new(0.0, 1.0);
        let b =
            StateVector::new(vec![q(1)], a.amplitudes().iter().map(|x| x * i).collect()).unwrap();
        assert_eq!(a.fingerprint(), "[0.7071,0.7071]");
        assert_eq!(a.fingerprint(), b.fingerprint());
    }

    #[test]
    fn labels_build_products() {
        let s = StateVector::from_labels(&[q(1), q(2)], "1+").unwrap();
        assert!((s.amplitudes()[1].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.amplitudes()[3].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(StateVector::from_labels(&[q(1)], "x").is_err());
        assert!(StateVector::from_labels(&[q(1)], "00").is_err());
    }
}
