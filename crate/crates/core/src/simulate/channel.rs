use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::Serialize;

use super::ZERO;
use crate::error::{Error, Result};
use crate::pattern::QubitId;

/// Choi matrix `J = Σ_{ij} Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|` (trace `2^{|I|}`). Row and
/// column index is `o + 2^{|O|}·i`, with bit `k` of `o` (of `i`) being
/// `outputs[k]` (`inputs[k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    pub inputs: Vec<QubitId>,
    pub outputs: Vec<QubitId>,
    pub choi: DMatrix<C64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub equal: bool,
    /// Largest entrywise difference of the Choi matrices.
    pub distance: f64,
}

impl Channel {
    /// Conjugation by `u` (`2^{|O|} × 2^{|I|}`).
    pub fn from_operator(inputs: Vec<QubitId>, outputs: Vec<QubitId>, u: &DMatrix<C64>) -> Self {
        Self::from_kraus(inputs, outputs, std::slice::from_ref(u))
    }

    pub fn from_kraus(inputs: Vec<QubitId>, outputs: Vec<QubitId>, ks: &[DMatrix<C64>]) -> Self {
        let n_out = outputs.len();
        let d = (1usize << n_out) << inputs.len();
        let mut choi = DMatrix::from_element(d, d, ZERO);
        for k in ks {
            let v = DMatrix::from_fn(d, 1, |idx, _| k[(idx & ((1 << n_out) - 1), idx >> n_out)]);
            choi += &v * v.adjoint();
        }
        Channel {
            inputs,
            outputs,
            choi,
        }
    }

    pub fn identity(ids: &[QubitId]) -> Self {
        let d = 1usize << ids.len();
        Self::from_operator(ids.to_vec(), ids.to_vec(), &DMatrix::identity(d, d))
    }

    pub fn input_dim(&self) -> usize {
        1 << self.inputs.len()
    }

    pub fn output_dim(&self) -> usize {
        1 << self.outputs.len()
    }

    /// `Tr_out J`, which is the identity for trace-preserving maps.
    pub fn output_trace(&self) -> DMatrix<C64> {
        let (dout, din) = (self.output_dim(), self.input_dim());
        DMatrix::from_fn(din, din, |i, j| {
            (0..dout)
                .map(|o| self.choi[(o + dout * i, o + dout * j)])
                .sum()
        })
    }

    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let t = self.output_trace();
        let d = self.input_dim();
        (t - DMatrix::<C64>::identity(d, d))
            .iter()
            .all(|x| x.norm() <= tol)
    }

    /// Smallest eigenvalue of the Hermitian part of `J`.
    pub fn min_eigenvalue(&self) -> f64 {
        let h = (&self.choi + self.choi.adjoint()) * C64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }

    /// `Φ(ρ)` for an input density matrix `ρ` (`2^{|I|}` square).
    pub fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let (dout, din) = (self.output_dim(), self.input_dim());
        DMatrix::from_fn(dout, dout, |o, p| {
            let mut acc = ZERO;
            for i in 0..din {
                for j in 0..din {
                    acc += self.choi[(o + dout * i, p + dout * j)] * rho[(i, j)];
                }
            }
            acc
        })
    }
}

/// Entrywise comparison of Choi matrices; channels carry no global phase.
pub fn channels_equal(a: &Channel, b: &Channel, tol: f64) -> Result<Comparison> {
    if a.choi.shape() != b.choi.shape()
        || a.inputs.len() != b.inputs.len()
        || a.outputs.len() != b.outputs.len()
    {
        return Err(Error::DimensionMismatch(
            a.input_dim(),
            a.output_dim(),
            b.input_dim(),
            b.output_dim(),
        ));
    }
    let distance = a
        .choi
        .iter()
        .zip(b.choi.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    Ok(Comparison {
        equal: distance <= tol,
        distance,
    })
}
