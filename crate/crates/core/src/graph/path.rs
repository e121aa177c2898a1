use super::mixed::MixedGraph;
use super::separation::is_arrow;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// A simple path in a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<usize>,
}

impl Path {
    /// Checks that consecutive nodes are adjacent in `g` and no node repeats.
    pub fn new(g: &MixedGraph, nodes: Vec<usize>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("empty path"));
        }
        let mut seen = NodeSet::EMPTY;
        for &v in &nodes {
            if v >= g.n() {
                return Err(Error::invalid(format!("node {v} out of range")));
            }
            if seen.contains(v) {
                return Err(Error::invalid(format!("path repeats {}", g.label(v))));
            }
            seen.insert(v);
        }
        for w in nodes.windows(2) {
            if !g.is_adjacent(w[0], w[1]) {
                return Err(Error::invalid(format!(
                    "{} and {} are not adjacent",
                    g.label(w[0]),
                    g.label(w[1])
                )));
            }
        }
        Ok(Path { nodes })
    }

    pub(crate) fn from_vec_unchecked(nodes: Vec<usize>) -> Self {
        Path { nodes }
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> usize {
        self.nodes[0]
    }

    pub fn last(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    /// Whether the node at position `i` is a collider on this path in `g`.
    /// Endpoints are never colliders.
    pub fn is_collider(&self, g: &MixedGraph, i: usize) -> bool {
        if i == 0 || i + 1 >= self.nodes.len() {
            return false;
        }
        let v = self.nodes[i];
        is_arrow(g, v, self.nodes[i - 1]) && is_arrow(g, v, self.nodes[i + 1])
    }

    /// Per-position collider flags.
    pub fn colliders(&self, g: &MixedGraph) -> Vec<bool> {
        (0..self.nodes.len()).map(|i| self.is_collider(g, i)).collect()
    }

    pub fn display(&self, g: &MixedGraph) -> String {
        self.nodes.iter().map(|&v| g.label(v)).collect::<Vec<_>>().join(",")
    }
}
