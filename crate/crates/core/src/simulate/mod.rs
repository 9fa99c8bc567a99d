//! Dense simulation of patterns and circuits, channel extraction and
//! equivalence checks.

mod channel;
pub(crate) mod circuit;
mod density;
mod pattern;
mod schedule;
mod stabilizer;
mod state;
pub(crate) mod tensor;

pub use channel::{channels_equal, Channel, Comparison};
pub use circuit::{
    apply_gates, circuit_channel, circuit_unitary, gate_unitary, MAX_CIRCUIT_QUBITS,
};
pub use density::{pattern_channel, pattern_channel_with};
pub use pattern::{
    check_determinism, enumerate_branches, pattern_unitary_fidelity, run_pattern, BranchRecord,
    Oracle, RunResult,
};
pub use schedule::low_width_order;
pub use stabilizer::{circuit_stabilizer_choi, pattern_stabilizer_choi, StabilizerChoi};
pub use state::StateVector;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::angle::{Alpha0, Angle};
use crate::exec::Execution;
use tensor::Mat2;

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_BRANCH_LIMIT: usize = 16;
/// Widest dense tensor (in qubits) any engine will allocate.
pub const DEFAULT_MAX_WIDTH: usize = 26;

#[derive(Debug, Clone, Copy)]
pub struct SimOptions {
    /// Most measurement outcomes that may be tracked at once.
    pub branch_limit: usize,
    pub max_width: usize,
    pub alpha0: Alpha0,
    pub exec: Execution,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            branch_limit: DEFAULT_BRANCH_LIMIT,
            max_width: DEFAULT_MAX_WIDTH,
            alpha0: Alpha0::default(),
            exec: Execution::default(),
        }
    }
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub(crate) fn mat_h() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub(crate) fn mat_x() -> Mat2 {
    [[ZERO, ONE], [ONE, ZERO]]
}

pub(crate) fn mat_z() -> Mat2 {
    [[ONE, ZERO], [ZERO, -ONE]]
}

pub(crate) fn mat_rz(theta: f64) -> Mat2 {
    [[ONE, ZERO], [ZERO, C64::from_polar(1.0, theta)]]
}

pub(crate) fn conj2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

/// `⟨+_θ|` and `⟨−_θ|` for `|±_θ⟩ = (|0⟩ ± e^{iθ}|1⟩)/√2`.
pub(crate) fn measurement_bra(theta: f64, outcome: bool) -> [C64; 2] {
    let s = if outcome {
        -FRAC_1_SQRT_2
    } else {
        FRAC_1_SQRT_2
    };
    [
        C64::new(FRAC_1_SQRT_2, 0.0),
        C64::from_polar(1.0, -theta) * s,
    ]
}

/// Rows are the two measurement bras, mapping `|±_θ⟩` to `|0⟩`, `|1⟩`.
pub(crate) fn measurement_basis(theta: f64) -> Mat2 {
    [measurement_bra(theta, false), measurement_bra(theta, true)]
}

/// Angle actually measured by `^τ[M^α]^σ`.
pub(crate) fn effective_angle(angle: Angle, sigma: bool, tau: bool) -> Angle {
    let a = if sigma { -angle } else { angle };
    if tau {
        a.plus_pi()
    } else {
        a
    }
}

/// `true` when `a = c·b` for some `|c| = 1`, within `tol` entrywise.
pub fn equal_up_to_phase(a: &DMatrix<C64>, b: &DMatrix<C64>, tol: f64) -> bool {
    if a.shape() != b.shape() {
        return false;
    }
    let Some((idx, _)) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
    else {
        return true;
    };
    if b[idx].norm() < tol {
        return a.iter().all(|x| x.norm() <= tol);
    }
    let c = a[idx] / b[idx];
    if (c.norm() - 1.0).abs() > tol.max(1e-12) * 10.0 {
        return false;
    }
    a.iter()
        .zip(b.iter())
        .all(|(x, y)| (x - c * y).norm() <= tol)
}

/// Unitary of `x ↦ (x_1, …, x_{n−1}, x_n ⊕ x_1 ⊕ … ⊕ x_{n−1})`, with
/// qubit `k` (0-based) on bit `k` of the basis index.
pub fn parity_unitary(n: usize) -> DMatrix<C64> {
    permutation_unitary(n, |x| {
        let top = 1usize << (n - 1);
        let p = (x & (top - 1)).count_ones() as usize & 1;
        x ^ (p * top)
    })
}

/// Unitary of `x ↦ (x_1 ⊕ x_n, …, x_{n−1} ⊕ x_n, x_n)`.
pub fn fanout_unitary(n: usize) -> DMatrix<C64> {
    permutation_unitary(n, |x| {
        let top = 1usize << (n - 1);
        if x & top != 0 {
            x ^ (top - 1)
        } else {
            x
        }
    })
}

fn permutation_unitary(n: usize, f: impl Fn(usize) -> usize) -> DMatrix<C64> {
    let d = 1usize << n;
    let mut m = DMatrix::from_element(d, d, ZERO);
    for x in 0..d {
        m[(f(x), x)] = ONE;
    }
    m
}
