use std::fmt;

use serde::{Deserialize, Serialize};

use super::dag::check_unique_labels;
use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

/// Mark at one endpoint of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndMark {
    Tail,
    Arrow,
    Circle,
}

impl EndMark {
    pub fn symbol(self) -> char {
        match self {
            EndMark::Tail => '-',
            EndMark::Arrow => '>',
            EndMark::Circle => 'o',
        }
    }

    pub(crate) fn from_symbol(c: char) -> Option<EndMark> {
        match c {
            '-' => Some(EndMark::Tail),
            '>' | '<' => Some(EndMark::Arrow),
            'o' => Some(EndMark::Circle),
            _ => None,
        }
    }
}

/// Graph whose edges carry an end mark at each endpoint. Used for MAGs and PAGs.
///
/// At most one edge per unordered pair, no self edges.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MixedGraph {
    labels: Vec<String>,
    /// `marks[a * n + b]` is the mark at `a` on the edge between `a` and `b`.
    marks: Vec<Option<EndMark>>,
    adj: Vec<NodeSet>,
}

impl MixedGraph {
    /// An edgeless graph over `labels`.
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n > MAX_NODES {
            return Err(Error::ResourceLimit {
                what: "node count",
                actual: n,
                limit: MAX_NODES,
            });
        }
        check_unique_labels(&labels)?;
        Ok(MixedGraph {
            labels,
            marks: vec![None; n * n],
            adj: vec![NodeSet::EMPTY; n],
        })
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        Self::new(labels.iter().map(|s| s.as_ref().to_string()).collect())
    }

    /// Every pair joined by `o-o`.
    pub fn complete_circle(labels: Vec<String>) -> Result<Self> {
        let mut g = Self::new(labels)?;
        let n = g.n();
        for a in 0..n {
            for b in a + 1..n {
                g.add_edge(a, b, EndMark::Circle, EndMark::Circle)?;
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n())
    }

    fn check_pair(&self, a: usize, b: usize) -> Result<()> {
        let n = self.n();
        if a >= n || b >= n {
            return Err(Error::invalid(format!("node index out of range ({a}, {b})")));
        }
        if a == b {
            return Err(Error::invalid(format!("self edge on {}", self.labels[a])));
        }
        Ok(())
    }

    /// Adds `a <mark_a>-<mark_b> b`. Fails if the pair is already joined.
    pub fn add_edge(&mut self, a: usize, b: usize, mark_a: EndMark, mark_b: EndMark) -> Result<()> {
        self.check_pair(a, b)?;
        if self.adj[a].contains(b) {
            return Err(Error::invalid(format!(
                "duplicate edge between {} and {}",
                self.labels[a], self.labels[b]
            )));
        }
        let n = self.n();
        self.marks[a * n + b] = Some(mark_a);
        self.marks[b * n + a] = Some(mark_b);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, a: usize, b: usize) {
        let n = self.n();
        self.marks[a * n + b] = None;
        self.marks[b * n + a] = None;
        self.adj[a].remove(b);
        self.adj[b].remove(a);
    }

    /// Overwrites the mark at `at` on the existing edge to `other`.
    pub fn set_mark(&mut self, at: usize, other: usize, mark: EndMark) -> Result<()> {
        self.check_pair(at, other)?;
        if !self.adj[at].contains(other) {
            return Err(Error::invalid(format!(
                "no edge between {} and {}",
                self.labels[at], self.labels[other]
            )));
        }
        let n = self.n();
        self.marks[at * n + other] = Some(mark);
        Ok(())
    }

    /// The mark at `at` on the edge between `at` and `other`.
    pub fn mark_at(&self, at: usize, other: usize) -> Option<EndMark> {
        self.marks[at * self.n() + other]
    }

    pub fn is_adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].contains(b)
    }

    pub fn neighbors(&self, v: usize) -> NodeSet {
        self.adj[v]
    }

    /// `a -> b`
    pub fn is_directed(&self, a: usize, b: usize) -> bool {
        self.mark_at(a, b) == Some(EndMark::Tail) && self.mark_at(b, a) == Some(EndMark::Arrow)
    }

    /// Nodes `u` with `u -> v`.
    pub fn parents(&self, v: usize) -> NodeSet {
        self.adj[v].iter().filter(|&u| self.is_directed(u, v)).collect()
    }

    /// Neighbors `u` whose edge has an arrowhead at `v`.
    pub fn arrows_into(&self, v: usize) -> NodeSet {
        self.adj[v]
            .iter()
            .filter(|&u| self.mark_at(v, u) == Some(EndMark::Arrow))
            .collect()
    }

    /// Edges as `(a, b, mark at a, mark at b)` with `a < b`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, EndMark, EndMark)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |a| {
            self.adj[a]
                .iter()
                .filter(move |&b| b > a)
                .map(move |b| (a, b, self.mark_at(a, b).unwrap(), self.mark_at(b, a).unwrap()))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn has_circles(&self) -> bool {
        self.edges()
            .any(|(_, _, ma, mb)| ma == EndMark::Circle || mb == EndMark::Circle)
    }

    /// Nodes with a directed (`->` only) path to `x`, including `x`.
    pub fn ancestors(&self, x: usize) -> Result<NodeSet> {
        if x >= self.n() {
            return Err(Error::invalid(format!("unknown node index {x}")));
        }
        Ok(self.ancestors_of_set(NodeSet::singleton(x)))
    }

    pub fn ancestors_of_set(&self, set: NodeSet) -> NodeSet {
        let mut an = set;
        let mut frontier = set;
        while let Some(v) = frontier.first() {
            frontier.remove(v);
            let fresh = self.parents(v).difference(an);
            an = an.union(fresh);
            frontier = frontier.union(fresh);
        }
        an
    }

    /// The edge between `a` and `b` in `a <m><m> b` notation, or `None`.
    pub fn edge_string(&self, a: usize, b: usize) -> Option<String> {
        let ma = self.mark_at(a, b)?;
        let mb = self.mark_at(b, a)?;
        Some(format!(
            "{} {}{} {}",
            self.labels[a],
            left_symbol(ma),
            mb.symbol(),
            self.labels[b]
        ))
    }

    /// First end mark (or adjacency) where `self` and `other` disagree, for diffs.
    pub fn first_difference(&self, other: &MixedGraph) -> Option<String> {
        if self.labels != other.labels {
            return Some(format!("node sets differ: {:?} vs {:?}", self.labels, other.labels));
        }
        let n = self.n();
        for a in 0..n {
            for b in a + 1..n {
                let left = (self.mark_at(a, b), self.mark_at(b, a));
                let right = (other.mark_at(a, b), other.mark_at(b, a));
                if left != right {
                    let show = |g: &MixedGraph| {
                        g.edge_string(a, b)
                            .unwrap_or_else(|| format!("{} (no edge) {}", g.labels[a], g.labels[b]))
                    };
                    return Some(format!("{} vs {}", show(self), show(other)));
                }
            }
        }
        None
    }

    /// The subgraph induced by `keep`, re-indexed densely in increasing order.
    pub fn induced(&self, keep: NodeSet) -> MixedGraph {
        let old: Vec<usize> = keep.iter().collect();
        let mut g =
            MixedGraph::new(old.iter().map(|&v| self.labels[v].clone()).collect()).expect("subset of valid labels");
        for (i, &a) in old.iter().enumerate() {
            for (j, &b) in old.iter().enumerate().skip(i + 1) {
                if let (Some(ma), Some(mb)) = (self.mark_at(a, b), self.mark_at(b, a)) {
                    g.add_edge(i, j, ma, mb).expect("fresh pair");
                }
            }
        }
        g
    }
}

/// Arrowheads at the left endpoint print as `<` in human-facing output.
pub(crate) fn left_symbol(m: EndMark) -> char {
    match m {
        EndMark::Arrow => '<',
        other => other.symbol(),
    }
}

impl fmt::Debug for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MixedGraph[")?;
        let mut first = true;
        for (a, b, _, _) in self.edges() {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{}", self.edge_string(a, b).unwrap())?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for MixedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> MixedGraph {
        MixedGraph::from_labels(&["A", "B", "C"]).unwrap()
    }

    #[test]
    fn duplicate_pair_is_rejected() {
        let mut g = abc();
        g.add_edge(0, 1, EndMark::Arrow, EndMark::Arrow).unwrap();
        assert!(g.add_edge(0, 1, EndMark::Tail, EndMark::Arrow).is_err());
        assert!(g.add_edge(1, 0, EndMark::Tail, EndMark::Arrow).is_err());
        assert!(g.add_edge(2, 2, EndMark::Tail, EndMark::Arrow).is_err());
    }

    #[test]
    fn directed_ancestry_ignores_other_edges() {
        let mut g = abc();
        g.add_edge(0, 1, EndMark::Tail, EndMark::Arrow).unwrap();
        g.add_edge(1, 2, EndMark::Arrow, EndMark::Arrow).unwrap();
        assert_eq!(g.ancestors(1).unwrap(), NodeSet::from_bits(0b011));
        assert_eq!(g.ancestors(2).unwrap(), NodeSet::singleton(2));
        assert_eq!(g.parents(1), NodeSet::singleton(0));
        assert_eq!(g.arrows_into(1), NodeSet::from_bits(0b101));
    }

    #[test]
    fn difference_names_first_mark() {
        let mut g = abc();
        g.add_edge(0, 1, EndMark::Circle, EndMark::Arrow).unwrap();
        let mut h = g.clone();
        assert_eq!(g.first_difference(&h), None);
        h.set_mark(0, 1, EndMark::Tail).unwrap();
        assert_eq!(g.first_difference(&h).unwrap(), "A o> B vs A -> B".to_string());
        h.remove_edge(0, 1);
        assert!(g.first_difference(&h).unwrap().contains("no edge"));
    }
}
