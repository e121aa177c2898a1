//! d-separation and m-separation by reachability over (node, arrival-mark) states.
//!
//! A node on a walk is a collider when both walk edges carry an arrowhead at
//! it. Colliders pass iff they are ancestors of the conditioning set,
//! noncolliders pass iff they are outside it. This walk criterion agrees with
//! the path definition; the integration tests check that against literal path
//! enumeration.

use super::dag::CausalDag;
use super::mag::is_ancestral;
use super::mixed::{EndMark, MixedGraph};
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Precomputed adjacency, arrowhead and ancestor sets of a graph.
#[derive(Debug, Clone)]
pub(crate) struct SeparationView {
    adj: Vec<NodeSet>,
    /// `arrow_in[v]` holds every neighbor `u` whose edge has an arrowhead at `v`.
    arrow_in: Vec<NodeSet>,
    /// Reflexive ancestor sets.
    anc: Vec<NodeSet>,
}

impl SeparationView {
    pub(crate) fn from_dag(dag: &CausalDag) -> Self {
        let n = dag.n();
        SeparationView {
            adj: (0..n).map(|v| dag.parents(v).union(dag.children(v))).collect(),
            arrow_in: (0..n).map(|v| dag.parents(v)).collect(),
            anc: (0..n).map(|v| dag.ancestors(v).unwrap()).collect(),
        }
    }

    pub(crate) fn from_mixed(g: &MixedGraph) -> Self {
        let n = g.n();
        SeparationView {
            adj: (0..n).map(|v| g.neighbors(v)).collect(),
            arrow_in: (0..n).map(|v| g.arrows_into(v)).collect(),
            anc: (0..n).map(|v| g.ancestors_of_set(NodeSet::singleton(v))).collect(),
        }
    }

    /// Builds a view straight from per-node adjacency, arrowhead and parent
    /// sets. Used by the equivalence-class enumerator to avoid allocating a
    /// `MixedGraph` per candidate.
    pub(crate) fn from_parts(adj: Vec<NodeSet>, arrow_in: Vec<NodeSet>, parents: &[NodeSet]) -> Self {
        let n = adj.len();
        let mut anc: Vec<NodeSet> = (0..n).map(NodeSet::singleton).collect();
        // parents form an acyclic relation for any candidate that reaches here
        loop {
            let mut changed = false;
            for v in 0..n {
                let mut a = anc[v];
                for p in parents[v].iter() {
                    a = a.union(anc[p]);
                }
                if a != anc[v] {
                    anc[v] = a;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        SeparationView { adj, arrow_in, anc }
    }

    pub(crate) fn ancestors(&self, v: usize) -> NodeSet {
        self.anc[v]
    }

    pub(crate) fn ancestors_of_set(&self, set: NodeSet) -> NodeSet {
        set.iter().fold(NodeSet::EMPTY, |acc, v| acc.union(self.anc[v]))
    }

    /// True iff some walk from `x` to `y` is open given `z`.
    pub(crate) fn connected(&self, x: usize, y: usize, z: NodeSet) -> bool {
        let an_z = self.ancestors_of_set(z);
        // visited[0]: arrived without arrowhead, visited[1]: arrived with one
        let mut visited = [NodeSet::EMPTY; 2];
        let mut stack: Vec<(usize, bool)> = Vec::new();
        for u in self.adj[x].iter() {
            if u == y {
                return true;
            }
            let arrow = self.arrow_in[u].contains(x);
            if !visited[arrow as usize].contains(u) {
                visited[arrow as usize].insert(u);
                stack.push((u, arrow));
            }
        }
        while let Some((v, arrow_in)) = stack.pop() {
            let in_z = z.contains(v);
            let ancestor_of_z = an_z.contains(v);
            for u in self.adj[v].iter() {
                let collider = arrow_in && self.arrow_in[v].contains(u);
                let open = if collider { ancestor_of_z } else { !in_z };
                if !open {
                    continue;
                }
                if u == y {
                    return true;
                }
                let arrow = self.arrow_in[u].contains(v);
                if !visited[arrow as usize].contains(u) {
                    visited[arrow as usize].insert(u);
                    stack.push((u, arrow));
                }
            }
        }
        false
    }
}

fn check_triple(n: usize, x: usize, y: usize, z: NodeSet) -> Result<()> {
    if x >= n || y >= n || z.iter().any(|v| v >= n) {
        return Err(Error::invalid("node index out of range"));
    }
    if x == y {
        return Err(Error::invalid("x and y must differ"));
    }
    if z.contains(x) || z.contains(y) {
        return Err(Error::invalid("conditioning set overlaps x or y"));
    }
    Ok(())
}

/// Whether `x` and `y` are d-separated by `z` in `dag`. All node kinds are
/// allowed in `z`; callers decide whether selection nodes belong there.
pub fn d_separated(dag: &CausalDag, x: usize, y: usize, z: NodeSet) -> Result<bool> {
    check_triple(dag.n(), x, y, z)?;
    Ok(!SeparationView::from_dag(dag).connected(x, y, z))
}

/// Whether `x` and `y` are m-separated by `z` in the ancestral graph `g`.
pub fn m_separated(g: &MixedGraph, x: usize, y: usize, z: NodeSet) -> Result<bool> {
    check_triple(g.n(), x, y, z)?;
    if !is_ancestral(g) {
        return Err(Error::contract("m-separation needs an ancestral graph"));
    }
    Ok(!SeparationView::from_mixed(g).connected(x, y, z))
}

/// Mark helper shared by the path-level predicates.
pub(crate) fn is_arrow(g: &MixedGraph, at: usize, other: usize) -> bool {
    g.mark_at(at, other) == Some(EndMark::Arrow)
}
