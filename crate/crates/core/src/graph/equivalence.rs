//! Brute-force Markov equivalence: the ground-truth oracle for PAG invariance.

use super::mag::{is_ancestral, is_maximal};
use super::mixed::{EndMark, MixedGraph};
use super::separation::SeparationView;
use crate::error::{Error, Result};
use crate::nodeset::NodeSet;

/// Default node-count guard for [`enumerate_equivalent_mags`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 5;

/// Every `(x, y, z)` triple with `x < y`, in a fixed order, with small
/// conditioning sets first so mismatches surface early.
fn triples(n: usize) -> Vec<(usize, usize, NodeSet)> {
    let all = NodeSet::full(n);
    let mut out = Vec::new();
    for size in 0..n.saturating_sub(1) {
        for x in 0..n {
            for y in x + 1..n {
                let rest = all.without(x).without(y);
                out.extend(rest.subsets_of_size(size).map(|z| (x, y, z)));
            }
        }
    }
    out
}

fn independence_model(view: &SeparationView, triples: &[(usize, usize, NodeSet)]) -> Vec<bool> {
    triples.iter().map(|&(x, y, z)| !view.connected(x, y, z)).collect()
}

/// True iff both MAGs give the same m-separation verdict on every triple.
pub fn markov_equivalent(g1: &MixedGraph, g2: &MixedGraph) -> Result<bool> {
    if g1.labels() != g2.labels() {
        return Err(Error::invalid("graphs are over different node sets"));
    }
    for g in [g1, g2] {
        if !is_ancestral(g) || !is_maximal(g) {
            return Err(Error::contract("markov_equivalent expects two MAGs"));
        }
    }
    let v1 = SeparationView::from_mixed(g1);
    let v2 = SeparationView::from_mixed(g2);
    Ok(triples(g1.n())
        .into_iter()
        .all(|(x, y, z)| v1.connected(x, y, z) == v2.connected(x, y, z)))
}

/// [`enumerate_equivalent_mags_with_limit`] at the default node guard.
pub fn enumerate_equivalent_mags(g: &MixedGraph) -> Result<Vec<MixedGraph>> {
    enumerate_equivalent_mags_with_limit(g, DEFAULT_ENUMERATION_LIMIT)
}

const EDGE_FORMS: [(EndMark, EndMark); 4] = [
    (EndMark::Tail, EndMark::Arrow),
    (EndMark::Arrow, EndMark::Tail),
    (EndMark::Arrow, EndMark::Arrow),
    (EndMark::Tail, EndMark::Tail),
];

/// All MAGs over the nodes of `g` that are Markov equivalent to it, `g` included.
///
/// Candidates are restricted to the skeleton of `g`: in a maximal graph two
/// nodes are adjacent iff no set separates them, so an equivalent MAG cannot
/// have any other skeleton. Every mark assignment on that skeleton is then
/// checked for ancestrality and compared triple-by-triple.
pub fn enumerate_equivalent_mags_with_limit(g: &MixedGraph, limit: usize) -> Result<Vec<MixedGraph>> {
    let n = g.n();
    if n > limit {
        return Err(Error::ResourceLimit {
            what: "node count for class enumeration",
            actual: n,
            limit,
        });
    }
    if !is_ancestral(g) || !is_maximal(g) {
        return Err(Error::contract("class enumeration expects a MAG"));
    }
    let triples = triples(n);
    let target = independence_model(&SeparationView::from_mixed(g), &triples);
    let skeleton: Vec<(usize, usize)> = g.edges().map(|(a, b, _, _)| (a, b)).collect();
    let m = skeleton.len();
    let mut choice = vec![0usize; m];
    let mut class = Vec::new();
    loop {
        if let Some(view) = candidate_view(n, &skeleton, &choice) {
            let same = triples
                .iter()
                .zip(&target)
                .all(|(&(x, y, z), &sep)| view.connected(x, y, z) != sep);
            if same {
                let mut mag = MixedGraph::new(g.labels().to_vec())?;
                for (&(a, b), &c) in skeleton.iter().zip(&choice) {
                    let (ma, mb) = EDGE_FORMS[c];
                    mag.add_edge(a, b, ma, mb)?;
                }
                debug_assert!(is_ancestral(&mag) && is_maximal(&mag));
                class.push(mag);
            }
        }
        // odometer over 4^m edge forms
        let mut i = 0;
        loop {
            if i == m {
                return Ok(class);
            }
            choice[i] += 1;
            if choice[i] < EDGE_FORMS.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

/// Separation view of one candidate, or `None` when it is not ancestral.
fn candidate_view(n: usize, skeleton: &[(usize, usize)], choice: &[usize]) -> Option<SeparationView> {
    let mut adj = vec![NodeSet::EMPTY; n];
    let mut arrow_in = vec![NodeSet::EMPTY; n];
    let mut parents = vec![NodeSet::EMPTY; n];
    let mut undirected = NodeSet::EMPTY;
    for (&(a, b), &c) in skeleton.iter().zip(choice) {
        adj[a].insert(b);
        adj[b].insert(a);
        match EDGE_FORMS[c] {
            (EndMark::Tail, EndMark::Arrow) => {
                arrow_in[b].insert(a);
                parents[b].insert(a);
            }
            (EndMark::Arrow, EndMark::Tail) => {
                arrow_in[a].insert(b);
                parents[a].insert(b);
            }
            (EndMark::Arrow, EndMark::Arrow) => {
                arrow_in[a].insert(b);
                arrow_in[b].insert(a);
            }
            _ => {
                undirected.insert(a);
                undirected.insert(b);
            }
        }
    }
    if undirected.iter().any(|v| !arrow_in[v].is_empty()) {
        return None;
    }
    // reject directed cycles before computing the closure
    let mut placed = NodeSet::EMPTY;
    while placed.len() < n {
        let next = (0..n).find(|&v| !placed.contains(v) && parents[v].is_subset(placed))?;
        placed.insert(next);
    }
    let view = SeparationView::from_parts(adj, arrow_in.clone(), &parents);
    for (x, into) in arrow_in.iter().enumerate() {
        if into.iter().any(|y| view.ancestors(y).contains(x)) {
            return None;
        }
    }
    Some(view)
}

/// The PAG of `g`: its skeleton, with each end mark kept where it is
/// identical across the whole equivalence class and a circle elsewhere.
pub fn invariant_marks(g: &MixedGraph) -> Result<MixedGraph> {
    invariant_marks_with_limit(g, DEFAULT_ENUMERATION_LIMIT)
}

pub fn invariant_marks_with_limit(g: &MixedGraph, limit: usize) -> Result<MixedGraph> {
    let class = enumerate_equivalent_mags_with_limit(g, limit)?;
    let mut pag = MixedGraph::new(g.labels().to_vec())?;
    for (a, b, _, _) in g.edges() {
        let agree = |at: usize, other: usize| {
            let first = class[0].mark_at(at, other);
            if class.iter().all(|m| m.mark_at(at, other) == first) {
                first.unwrap()
            } else {
                EndMark::Circle
            }
        };
        pag.add_edge(a, b, agree(a, b), agree(b, a))?;
    }
    Ok(pag)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(labels: &[&str], edges: &[(usize, usize, EndMark, EndMark)]) -> MixedGraph {
        let mut g = MixedGraph::from_labels(labels).unwrap();
        for &(a, b, ma, mb) in edges {
            g.add_edge(a, b, ma, mb).unwrap();
        }
        g
    }

    use EndMark::{Arrow, Circle, Tail};

    #[test]
    fn single_edge_class_has_four_members() {
        let g = graph(&["A", "B"], &[(0, 1, Tail, Arrow)]);
        let class = enumerate_equivalent_mags(&g).unwrap();
        assert_eq!(class.len(), 4);
        assert!(class.contains(&g));
        let pag = invariant_marks(&g).unwrap();
        assert_eq!(pag.edge_string(0, 1).unwrap(), "A oo B");
    }

    #[test]
    fn collider_class_keeps_arrowheads_at_center() {
        let g = graph(&["A", "B", "C"], &[(0, 1, Tail, Arrow), (2, 1, Tail, Arrow)]);
        let class = enumerate_equivalent_mags(&g).unwrap();
        // A -> B <- C, A <-> B <- C, A -> B <-> C and A <-> B <-> C all
        // encode exactly A _||_ C.
        assert_eq!(class.len(), 4);
        assert!(class.iter().all(|m| m.mark_at(1, 0) == Some(Arrow)));
        let pag = invariant_marks(&g).unwrap();
        assert_eq!(pag.edge_string(0, 1).unwrap(), "A o> B");
        assert_eq!(pag.edge_string(2, 1).unwrap(), "C o> B");
    }

    #[test]
    fn empty_graph_class_is_singleton() {
        let g = graph(&["A", "B", "C"], &[]);
        assert_eq!(enumerate_equivalent_mags(&g).unwrap().len(), 1);
        assert_eq!(invariant_marks(&g).unwrap().edge_count(), 0);
    }

    #[test]
    fn equivalence_examples() {
        let fwd = graph(&["A", "B", "C"], &[(0, 1, Tail, Arrow), (1, 2, Tail, Arrow)]);
        let back = graph(&["A", "B", "C"], &[(0, 1, Arrow, Tail), (1, 2, Arrow, Tail)]);
        assert!(markov_equivalent(&fwd, &fwd).unwrap());
        assert!(markov_equivalent(&fwd, &back).unwrap());
        let d = graph(&["A", "B"], &[(0, 1, Tail, Arrow)]);
        let bi = graph(&["A", "B"], &[(0, 1, Arrow, Arrow)]);
        assert!(markov_equivalent(&d, &bi).unwrap());
        let col = graph(&["A", "B", "C"], &[(0, 1, Tail, Arrow), (2, 1, Tail, Arrow)]);
        assert!(!markov_equivalent(&fwd, &col).unwrap());
        let other = graph(&["A", "B", "D"], &[]);
        assert!(markov_equivalent(&fwd, &other).is_err());
    }

    #[test]
    fn guard_rejects_large_graphs() {
        let g = graph(&["A", "B", "C", "D", "E", "F"], &[]);
        assert!(matches!(
            enumerate_equivalent_mags(&g),
            Err(Error::ResourceLimit { .. })
        ));
        assert_eq!(enumerate_equivalent_mags_with_limit(&g, 6).unwrap().len(), 1);
    }

    #[test]
    fn pag_never_contradicts_class() {
        let g = graph(
            &["A", "B", "C", "D"],
            &[(0, 2, Tail, Arrow), (1, 2, Tail, Arrow), (2, 3, Tail, Arrow)],
        );
        let pag = invariant_marks(&g).unwrap();
        assert_eq!(pag.edge_string(2, 3).unwrap(), "C -> D");
        assert_eq!(pag.mark_at(0, 2), Some(Circle));
        // idempotent on its own class representative
        assert_eq!(invariant_marks(&g).unwrap(), pag);
    }
}
