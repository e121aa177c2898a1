//! Conditional-independence oracles and the searches run against them.

mod cache;
mod factlog;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{CausalDag, SeparationView};
use crate::nodeset::NodeSet;

pub use cache::CachedOracle;
pub use factlog::{fact_line, FactLog};

/// Answers "is `x` independent of `y` given `z`?" over a fixed list of
/// observed variables, indexed `0..variables().len()`.
///
/// Implementations must be deterministic and safe to query concurrently.
pub trait IndependenceOracle: Send + Sync {
    fn variables(&self) -> &[String];

    fn independent(&self, x: usize, y: usize, z: NodeSet) -> bool;

    fn query(&self, q: &CiQuery) -> bool {
        self.independent(q.x, q.y, q.z)
    }

    fn n(&self) -> usize {
        self.variables().len()
    }
}

impl<T: IndependenceOracle + ?Sized> IndependenceOracle for &T {
    fn variables(&self) -> &[String] {
        (**self).variables()
    }

    fn independent(&self, x: usize, y: usize, z: NodeSet) -> bool {
        (**self).independent(x, y, z)
    }
}

impl<T: IndependenceOracle + ?Sized> IndependenceOracle for Arc<T> {
    fn variables(&self) -> &[String] {
        (**self).variables()
    }

    fn independent(&self, x: usize, y: usize, z: NodeSet) -> bool {
        (**self).independent(x, y, z)
    }
}

/// `x _||_ y | z` over observed variable indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CiQuery {
    pub x: usize,
    pub y: usize,
    pub z: NodeSet,
}

impl CiQuery {
    pub fn new(x: usize, y: usize, z: NodeSet, n: usize) -> Result<Self> {
        if x >= n || y >= n || !z.is_subset(NodeSet::full(n)) {
            return Err(Error::invalid("query mentions an unknown variable"));
        }
        if x == y {
            return Err(Error::invalid("query needs two distinct variables"));
        }
        if z.contains(x) || z.contains(y) {
            return Err(Error::invalid("conditioning set contains x or y"));
        }
        Ok(CiQuery { x, y, z })
    }
}

/// A recorded conditional (in)dependence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CiFact {
    pub x: usize,
    pub y: usize,
    pub z: NodeSet,
    pub independent: bool,
    /// Set only after checking that no strict subset of `z` separates.
    pub minimal: bool,
    /// Nodes `w` with `x` and `y` dependent given `z + w`.
    pub destroyers: NodeSet,
}

impl CiFact {
    pub fn independence(x: usize, y: usize, z: NodeSet, minimal: bool) -> Self {
        CiFact {
            x,
            y,
            z,
            independent: true,
            minimal,
            destroyers: NodeSet::EMPTY,
        }
    }

    pub fn dependence(x: usize, y: usize, z: NodeSet) -> Self {
        CiFact {
            x,
            y,
            z,
            independent: false,
            minimal: false,
            destroyers: NodeSet::EMPTY,
        }
    }

    pub fn query(&self) -> CiQuery {
        CiQuery {
            x: self.x,
            y: self.y,
            z: self.z,
        }
    }

    pub fn separates(&self, a: usize, b: usize) -> bool {
        self.independent && ((self.x == a && self.y == b) || (self.x == b && self.y == a))
    }

    /// Short human form, e.g. `W1 _||_ Y | [X]`.
    pub fn describe(&self, labels: &[String]) -> String {
        let z = join_labels(self.z, labels);
        if self.independent {
            let (open, close) = if self.minimal { ("[", "]") } else { ("{", "}") };
            format!("{} _||_ {} | {open}{z}{close}", labels[self.x], labels[self.y])
        } else {
            format!("{} _|/|_ {} | {{{z}}}", labels[self.x], labels[self.y])
        }
    }
}

pub(crate) fn join_labels(set: NodeSet, labels: &[String]) -> String {
    set.iter().map(|v| labels[v].as_str()).collect::<Vec<_>>().join(",")
}

/// Exact oracle answering by d-separation in a causal DAG, with the
/// selection nodes always conditioned on.
#[derive(Debug, Clone)]
pub struct DagOracle {
    dag: CausalDag,
    view: SeparationView,
    observed: Vec<usize>,
    variables: Vec<String>,
}

impl DagOracle {
    pub fn new(dag: &CausalDag) -> Self {
        let observed: Vec<usize> = dag.observed().iter().collect();
        DagOracle {
            variables: observed.iter().map(|&v| dag.label(v).to_string()).collect(),
            view: SeparationView::from_dag(dag),
            dag: dag.clone(),
            observed,
        }
    }

    pub fn dag(&self) -> &CausalDag {
        &self.dag
    }

    /// DAG node index of observed variable `var`.
    pub fn dag_index(&self, var: usize) -> usize {
        self.observed[var]
    }

    fn to_dag_set(&self, z: NodeSet) -> NodeSet {
        z.iter().map(|v| self.observed[v]).collect()
    }

    /// Query by label; latent, selection and unknown labels are rejected.
    pub fn query_labels(&self, x: &str, y: &str, z: &[&str]) -> Result<bool> {
        let var = |label: &str| {
            self.variables
                .iter()
                .position(|v| v == label)
                .ok_or_else(|| match self.dag.index_of(label) {
                    Some(_) => Error::invalid(format!("{label} is not an observed variable")),
                    None => Error::invalid(format!("unknown variable {label}")),
                })
        };
        let z = z.iter().map(|l| var(l)).collect::<Result<NodeSet>>()?;
        let q = CiQuery::new(var(x)?, var(y)?, z, self.variables.len())?;
        Ok(self.query(&q))
    }
}

/// The exact oracle of `dag`.
pub fn dag_oracle(dag: &CausalDag) -> DagOracle {
    DagOracle::new(dag)
}

impl IndependenceOracle for DagOracle {
    fn variables(&self) -> &[String] {
        &self.variables
    }

    fn independent(&self, x: usize, y: usize, z: NodeSet) -> bool {
        let dz = self.to_dag_set(z).union(self.dag.selection());
        !self.view.connected(self.observed[x], self.observed[y], dz)
    }
}

/// Searches conditioning sets over all other variables in increasing size,
/// each size in lexicographic order, and returns the first separator. A
/// minimum-cardinality separator has no separating strict subset, so the
/// result is flagged minimal.
pub fn find_minimal_independence<O: IndependenceOracle + ?Sized>(
    oracle: &O,
    x: usize,
    y: usize,
    max_cond: usize,
) -> Option<CiFact> {
    let candidates = NodeSet::full(oracle.n()).without(x).without(y);
    for size in 0..=max_cond.min(candidates.len()) {
        for z in candidates.subsets_of_size(size) {
            if oracle.independent(x, y, z) {
                return Some(CiFact::independence(x, y, z, true));
            }
        }
    }
    None
}

/// Fills `fact.destroyers` with every `w` outside `{x, y} + z` that makes
/// `x` and `y` dependent when added to `z`, and returns it.
pub fn find_destroyers<O: IndependenceOracle + ?Sized>(oracle: &O, fact: &mut CiFact) -> Result<NodeSet> {
    if !fact.independent {
        return Err(Error::contract("destroyers are defined for independence facts"));
    }
    let others = NodeSet::full(oracle.n())
        .without(fact.x)
        .without(fact.y)
        .difference(fact.z);
    let found: NodeSet = others
        .iter()
        .filter(|&w| !oracle.independent(fact.x, fact.y, fact.z.with(w)))
        .collect();
    fact.destroyers = found;
    Ok(found)
}

/// Single-removal minimality check: the fact holds and dropping any one
/// conditioning node breaks it.
pub fn verify_minimal<O: IndependenceOracle + ?Sized>(oracle: &O, fact: &CiFact) -> bool {
    oracle.independent(fact.x, fact.y, fact.z)
        && fact
            .z
            .iter()
            .all(|v| !oracle.independent(fact.x, fact.y, fact.z.without(v)))
}

/// Full bracket-sense minimality: no strict subset of `z` separates.
pub fn verify_minimal_exhaustive<O: IndependenceOracle + ?Sized>(oracle: &O, fact: &CiFact) -> bool {
    oracle.independent(fact.x, fact.y, fact.z)
        && fact
            .z
            .subsets()
            .filter(|&s| s != fact.z)
            .all(|s| !oracle.independent(fact.x, fact.y, s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y_structure() -> CausalDag {
        CausalDag::builder()
            .observed("W1")
            .observed("W2")
            .observed("X")
            .observed("Y")
            .edge("W1", "X")
            .edge("W2", "X")
            .edge("X", "Y")
            .build()
            .unwrap()
    }

    #[test]
    fn y_structure_answers() {
        let o = dag_oracle(&y_structure());
        assert!(o.query_labels("W1", "W2", &[]).unwrap());
        assert!(o.query_labels("W1", "Y", &["X"]).unwrap());
        assert!(!o.query_labels("W1", "Y", &[]).unwrap());
    }

    #[test]
    fn selection_conditioning_activates_collider() {
        let dag = CausalDag::builder()
            .observed("A")
            .selection("Sel")
            .observed("B")
            .edge("A", "Sel")
            .edge("B", "Sel")
            .build()
            .unwrap();
        let o = dag_oracle(&dag);
        assert!(!o.query_labels("A", "B", &[]).unwrap());
        assert!(!crate::graph::d_separated(&dag, 0, 2, NodeSet::singleton(1)).unwrap());
        assert!(o.query_labels("A", "Sel", &[]).is_err());
        assert!(o.query_labels("A", "B", &["Sel"]).is_err());
        assert!(o.query_labels("A", "Q", &[]).is_err());
    }

    #[test]
    fn minimal_independence_search() {
        let o = dag_oracle(&y_structure());
        let f = find_minimal_independence(&o, 0, 3, 2).unwrap();
        assert_eq!(f.z, NodeSet::singleton(2));
        assert!(f.minimal && f.independent);
        let f = find_minimal_independence(&o, 0, 1, 2).unwrap();
        assert_eq!(f.z, NodeSet::EMPTY);
        assert!(find_minimal_independence(&o, 0, 2, 2).is_none());
        // budget too small to reach {X}
        assert!(find_minimal_independence(&o, 0, 3, 0).is_none());
    }

    #[test]
    fn destroyers_of_collider_parents() {
        let o = dag_oracle(&y_structure());
        let mut f = find_minimal_independence(&o, 0, 1, 2).unwrap();
        let d = find_destroyers(&o, &mut f).unwrap();
        assert_eq!(d, NodeSet::from_bits(0b1100));
        assert_eq!(f.destroyers, d);
        let mut dep = CiFact::dependence(0, 2, NodeSet::EMPTY);
        assert!(find_destroyers(&o, &mut dep).is_err());
    }

    #[test]
    fn chain_and_empty_have_no_destroyers() {
        let chain = CausalDag::builder()
            .observed("A")
            .observed("B")
            .observed("C")
            .edge("A", "B")
            .edge("B", "C")
            .build()
            .unwrap();
        let o = dag_oracle(&chain);
        let mut f = find_minimal_independence(&o, 0, 2, 1).unwrap();
        assert_eq!(find_destroyers(&o, &mut f).unwrap(), NodeSet::EMPTY);

        let empty = CausalDag::builder()
            .observed("A")
            .observed("B")
            .observed("C")
            .build()
            .unwrap();
        let o = dag_oracle(&empty);
        let mut f = find_minimal_independence(&o, 0, 1, 1).unwrap();
        assert_eq!(find_destroyers(&o, &mut f).unwrap(), NodeSet::EMPTY);
    }

    #[test]
    fn query_validation() {
        assert!(CiQuery::new(0, 0, NodeSet::EMPTY, 3).is_err());
        assert!(CiQuery::new(0, 1, NodeSet::singleton(1), 3).is_err());
        assert!(CiQuery::new(0, 5, NodeSet::EMPTY, 3).is_err());
        assert!(CiQuery::new(0, 1, NodeSet::singleton(2), 3).is_ok());
    }
}
