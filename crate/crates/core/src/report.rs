//! Quantum depth of a pattern with the classical parity work it needs
//! between layers, under a constant-cost and a logarithmic-cost model.

use serde::Serialize;

use crate::error::Result;
use crate::pattern::Pattern;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LayerSummary {
    pub commands: usize,
    /// Widest signal read in the layer, 0 if none.
    pub signal_width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DepthReport {
    pub size: usize,
    pub quantum_depth: usize,
    pub layers: Vec<LayerSummary>,
    /// Layers that read a signal, one unit each.
    pub classical_depth_constant_model: usize,
    /// `⌈log₂ w⌉` per such layer for its widest signal `w`, at least 1.
    pub classical_depth_log_model: usize,
    pub max_signal_width: usize,
}

pub fn log_cost(width: usize) -> usize {
    match width {
        0 => 0,
        1 => 1,
        w => (usize::BITS - (w - 1).leading_zeros()) as usize,
    }
}

/// Corrections and dependent measurements both count as signal-bearing.
pub fn depth_report(t: &Pattern) -> Result<DepthReport> {
    let layering = t.layers()?;
    let layers: Vec<LayerSummary> = layering
        .layers
        .iter()
        .map(|l| LayerSummary {
            commands: l.len(),
            signal_width: l
                .iter()
                .flat_map(|&i| t.commands[i].signals())
                .map(|s| s.width())
                .max()
                .unwrap_or(0),
        })
        .collect();
    let classical: Vec<usize> = layers
        .iter()
        .map(|l| l.signal_width)
        .filter(|&w| w > 0)
        .collect();
    Ok(DepthReport {
        size: t.size(),
        quantum_depth: layering.depth(),
        classical_depth_constant_model: classical.len(),
        classical_depth_log_model: classical.iter().map(|&w| log_cost(w)).sum(),
        max_signal_width: classical.iter().copied().max().unwrap_or(0),
        layers,
    })
}
