//! Overlap layering shared by patterns, circuits and scheme patterns.
//!
//! A command's layer is one more than the largest layer among earlier
//! commands whose domain intersects its own. The number of layers is the
//! length of the longest chain of consecutively overlapping commands.

use std::collections::HashMap;

use serde::Serialize;

use crate::pattern::QubitId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layering {
    /// Command indices per layer, in sequence order within each layer.
    pub layers: Vec<Vec<usize>>,
    /// 1-based layer of every command.
    pub layer_of: Vec<usize>,
}

impl Layering {
    pub fn from_domains<I, D>(domains: I) -> Self
    where
        I: IntoIterator<Item = D>,
        D: IntoIterator<Item = QubitId>,
    {
        // highest layer touching each qubit so far
        let mut front: HashMap<QubitId, usize> = HashMap::new();
        let mut layer_of = Vec::new();
        let mut layers: Vec<Vec<usize>> = Vec::new();
        for (idx, dom) in domains.into_iter().enumerate() {
            let dom: Vec<QubitId> = dom.into_iter().collect();
            let layer = 1 + dom
                .iter()
                .filter_map(|q| front.get(q).copied())
                .max()
                .unwrap_or(0);
            for q in dom {
                front.insert(q, layer);
            }
            if layers.len() < layer {
                layers.resize(layer, Vec::new());
            }
            layers[layer - 1].push(idx);
            layer_of.push(layer);
        }
        Layering { layers, layer_of }
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[u32]) -> Vec<QubitId> {
        v.iter().map(|&x| QubitId(x)).collect()
    }

    #[test]
    fn empty_has_depth_zero() {
        let l = Layering::from_domains(Vec::<Vec<QubitId>>::new());
        assert_eq!(l.depth(), 0);
    }

    #[test]
    fn disjoint_commands_share_a_layer() {
        let l = Layering::from_domains(vec![q(&[1, 2]), q(&[3, 4]), q(&[2, 3])]);
        assert_eq!(l.layer_of, vec![1, 1, 2]);
        assert_eq!(l.layers, vec![vec![0, 1], vec![2]]);
    }
}
