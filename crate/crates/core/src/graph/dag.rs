use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::mixed::{EndMark, MixedGraph};
use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeRole {
    Observed,
    Latent,
    /// Implicitly conditioned on by the sampling process.
    Selection,
}

/// Ground-truth causal structure over observed, latent and selection nodes.
///
/// Immutable once built. Reflexive ancestor sets are precomputed because every
/// separation query needs them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalDag {
    labels: Vec<String>,
    roles: Vec<NodeRole>,
    parents: Vec<NodeSet>,
    children: Vec<NodeSet>,
    ancestors: Vec<NodeSet>,
}

impl CausalDag {
    pub fn builder() -> DagBuilder {
        DagBuilder::default()
    }

    /// Builds a DAG from parallel label/role lists and `(parent, child)` index pairs.
    pub fn new(labels: Vec<String>, roles: Vec<NodeRole>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        if roles.len() != n {
            return Err(Error::invalid("label and role lists differ in length"));
        }
        if n > MAX_NODES {
            return Err(Error::ResourceLimit {
                what: "node count",
                actual: n,
                limit: MAX_NODES,
            });
        }
        check_unique_labels(&labels)?;
        let mut parents = vec![NodeSet::EMPTY; n];
        let mut children = vec![NodeSet::EMPTY; n];
        for &(p, c) in edges {
            if p >= n || c >= n {
                return Err(Error::invalid(format!("edge ({p}, {c}) out of range")));
            }
            if p == c {
                return Err(Error::invalid(format!("self loop on {}", labels[p])));
            }
            parents[c].insert(p);
            children[p].insert(c);
        }
        let order = topological_order(&parents).ok_or_else(|| Error::invalid("edge set contains a directed cycle"))?;
        let mut ancestors = vec![NodeSet::EMPTY; n];
        for &v in &order {
            let mut an = NodeSet::singleton(v);
            for p in parents[v].iter() {
                an = an.union(ancestors[p]);
            }
            ancestors[v] = an;
        }
        Ok(CausalDag {
            labels,
            roles,
            parents,
            children,
            ancestors,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn role(&self, v: usize) -> NodeRole {
        self.roles[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    fn role_set(&self, role: NodeRole) -> NodeSet {
        (0..self.n()).filter(|&v| self.roles[v] == role).collect()
    }

    pub fn observed(&self) -> NodeSet {
        self.role_set(NodeRole::Observed)
    }

    pub fn latent(&self) -> NodeSet {
        self.role_set(NodeRole::Latent)
    }

    pub fn selection(&self) -> NodeSet {
        self.role_set(NodeRole::Selection)
    }

    pub fn parents(&self, v: usize) -> NodeSet {
        self.parents[v]
    }

    pub fn children(&self, v: usize) -> NodeSet {
        self.children[v]
    }

    /// `(parent, child)` pairs in increasing parent, then child, order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |p| self.children[p].iter().map(move |c| (p, c)))
    }

    pub fn edge_count(&self) -> usize {
        self.children.iter().map(|c| c.len()).sum()
    }

    /// Nodes with a directed path to `x`, including `x`.
    pub fn ancestors(&self, x: usize) -> Result<NodeSet> {
        self.check_node(x)?;
        Ok(self.ancestors[x])
    }

    pub fn ancestors_of_set(&self, set: NodeSet) -> NodeSet {
        set.iter().fold(NodeSet::EMPTY, |acc, v| acc.union(self.ancestors[v]))
    }

    /// True iff there is a directed path `from -> .. -> to` (length >= 1).
    pub fn has_directed_path(&self, from: usize, to: usize) -> bool {
        from != to && self.ancestors[to].contains(from)
    }

    /// The DAG as a mixed graph over all of its nodes, every edge `->`.
    pub fn to_mixed_graph(&self) -> MixedGraph {
        let mut g = MixedGraph::new(self.labels.clone()).expect("labels already validated");
        for (p, c) in self.edges() {
            g.add_edge(p, c, EndMark::Tail, EndMark::Arrow)
                .expect("dag edges are unique");
        }
        g
    }

    pub(crate) fn check_node(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::invalid(format!("unknown node index {v}")))
        }
    }
}

pub(crate) fn check_unique_labels(labels: &[String]) -> Result<()> {
    let mut seen = HashMap::new();
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || l.chars().any(|c| c.is_whitespace() || c == ',') {
            return Err(Error::invalid(format!("invalid node label {l:?}")));
        }
        if let Some(j) = seen.insert(l.as_str(), i) {
            return Err(Error::invalid(format!("duplicate label {l:?} (nodes {j} and {i})")));
        }
    }
    Ok(())
}

fn topological_order(parents: &[NodeSet]) -> Option<Vec<usize>> {
    let n = parents.len();
    let mut placed = NodeSet::EMPTY;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let next = (0..n).find(|&v| !placed.contains(v) && parents[v].is_subset(placed))?;
        placed.insert(next);
        order.push(next);
    }
    Some(order)
}

/// Incremental construction by label.
#[derive(Debug, Default, Clone)]
pub struct DagBuilder {
    labels: Vec<String>,
    roles: Vec<NodeRole>,
    edges: Vec<(String, String)>,
}

impl DagBuilder {
    pub fn node(mut self, label: &str, role: NodeRole) -> Self {
        self.labels.push(label.to_string());
        self.roles.push(role);
        self
    }

    pub fn observed(self, label: &str) -> Self {
        self.node(label, NodeRole::Observed)
    }

    pub fn latent(self, label: &str) -> Self {
        self.node(label, NodeRole::Latent)
    }

    pub fn selection(self, label: &str) -> Self {
        self.node(label, NodeRole::Selection)
    }

    pub fn edge(mut self, parent: &str, child: &str) -> Self {
        self.edges.push((parent.to_string(), child.to_string()));
        self
    }

    pub fn build(self) -> Result<CausalDag> {
        let lookup = |l: &str| {
            self.labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::invalid(format!("edge mentions unknown node {l:?}")))
        };
        let edges = self
            .edges
            .iter()
            .map(|(p, c)| Ok((lookup(p)?, lookup(c)?)))
            .collect::<Result<Vec<_>>>()?;
        CausalDag::new(self.labels, self.roles, &edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_ancestors() {
        let dag = CausalDag::builder()
            .observed("A")
            .observed("B")
            .observed("C")
            .edge("A", "B")
            .edge("B", "C")
            .build()
            .unwrap();
        assert_eq!(dag.ancestors(2).unwrap(), NodeSet::full(3));
        assert_eq!(dag.ancestors(0).unwrap(), NodeSet::singleton(0));
        assert!(dag.has_directed_path(0, 2));
        assert!(!dag.has_directed_path(2, 0));
        assert!(dag.ancestors(3).is_err());
    }

    #[test]
    fn isolated_node_is_its_own_ancestor() {
        let dag = CausalDag::builder().observed("X").build().unwrap();
        assert_eq!(dag.ancestors(0).unwrap(), NodeSet::singleton(0));
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        let cyc = CausalDag::builder()
            .observed("A")
            .observed("B")
            .edge("A", "B")
            .edge("B", "A")
            .build();
        assert!(matches!(cyc, Err(Error::InvalidArgument(_))));
        let dup = CausalDag::builder().observed("A").latent("A").build();
        assert!(matches!(dup, Err(Error::InvalidArgument(_))));
        let unknown = CausalDag::builder().observed("A").edge("A", "Q").build();
        assert!(unknown.is_err());
    }

    #[test]
    fn role_partitions() {
        let dag = CausalDag::builder()
            .observed("A")
            .latent("L")
            .selection("S")
            .observed("B")
            .edge("L", "A")
            .edge("A", "S")
            .build()
            .unwrap();
        assert_eq!(dag.observed().iter().collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(dag.latent(), NodeSet::singleton(1));
        assert_eq!(dag.selection(), NodeSet::singleton(2));
        let all = dag.observed().union(dag.latent()).union(dag.selection());
        assert_eq!(all, NodeSet::full(4));
    }
}
