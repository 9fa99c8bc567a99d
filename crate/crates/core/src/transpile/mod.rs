//! Translations between circuits and patterns.

mod flatten;
mod gadgets;
mod to_circuit;
mod to_pattern;

use serde::Serialize;

pub use flatten::{flip_signal, pauli_flatten};
pub use gadgets::{cz_gadget, gate_gadget, hadamard_gadget, rotation_gadget, GadgetCatalog};
pub use to_circuit::{pattern_to_fanout_circuit, pattern_to_strict_circuit};
pub use to_pattern::{circuit_to_pattern, fanout_pattern, parity_pattern};

/// Pinned expansion constants. C1 and C2 follow the gadget catalog (depth 6
/// and size 8 per gate, plus the seam between layers); the rest were
/// measured on seeded random instances and given headroom.
pub mod bounds {
    /// `depth(circuit_to_pattern(c)) ≤ C1·depth(c)` for circuits without fan-out.
    pub const C1: usize = 8;
    /// `size(circuit_to_pattern(c)) ≤ C2·size(c)` for circuits without fan-out.
    pub const C2: usize = 8;
    /// `depth(pattern_to_fanout_circuit(t)) ≤ C3·depth(t)`.
    pub const C3: usize = 12;
    /// `size(pattern_to_fanout_circuit(t)) ≤ C4·size(t)²`.
    pub const C4: usize = 8;
    /// `depth(pattern_to_strict_circuit(t)) ≤ C5·depth(t)·⌈log₂(size(t)+2)⌉`.
    pub const C5: usize = 12;
    /// `depth(scheme_to_fanout_circuit(p)) ≤ C6·depth(p)`.
    pub const C6: usize = 8;
    /// `depth(scheme_to_pattern(p)) ≤ C7·depth(p)`.
    pub const C7: usize = 24;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Metrics {
    pub size: usize,
    pub depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TranslationReport {
    pub input: Metrics,
    pub output: Metrics,
    /// `output.size / max(input.size, 1)`.
    pub size_ratio: f64,
    /// `output.depth / max(input.depth, 1)`.
    pub depth_ratio: f64,
}

impl TranslationReport {
    pub fn new(input: Metrics, output: Metrics) -> Self {
        let r = |o: usize, i: usize| o as f64 / i.max(1) as f64;
        TranslationReport {
            input,
            output,
            size_ratio: r(output.size, input.size),
            depth_ratio: r(output.depth, input.depth),
        }
    }
}
