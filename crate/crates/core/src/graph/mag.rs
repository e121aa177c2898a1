use super::dag::CausalDag;
use super::mixed::{EndMark, MixedGraph};
use super::separation::SeparationView;
use crate::error::Result;
use crate::nodeset::NodeSet;

/// Projects a causal DAG onto its maximal ancestral graph over the observed nodes.
///
/// Observed nodes keep their labels and relative order. Two of them are
/// adjacent iff no subset of the remaining observed nodes d-separates them
/// given the selection set. The mark at `X` on edge `X - Y` is a tail iff `X`
/// is an ancestor of `Y` or of some selection node, otherwise an arrowhead.
pub fn project_to_mag(dag: &CausalDag) -> Result<MixedGraph> {
    let view = SeparationView::from_dag(dag);
    let observed: Vec<usize> = dag.observed().iter().collect();
    let sel = dag.selection();
    let an_sel = dag.ancestors_of_set(sel);
    let mut mag = MixedGraph::new(observed.iter().map(|&v| dag.label(v).to_string()).collect())?;
    let all_obs = dag.observed();
    for (i, &x) in observed.iter().enumerate() {
        for (j, &y) in observed.iter().enumerate().skip(i + 1) {
            let rest = all_obs.without(x).without(y);
            let separable = rest.subsets().any(|z| !view.connected(x, y, z.union(sel)));
            if separable {
                continue;
            }
            let mark = |a: usize, b: usize| {
                if an_sel.contains(a) || view.ancestors(b).contains(a) {
                    EndMark::Tail
                } else {
                    EndMark::Arrow
                }
            };
            mag.add_edge(i, j, mark(x, y), mark(y, x))?;
        }
    }
    Ok(mag)
}

/// True iff `g` has no circle marks, no arrowhead at `X` on an edge to `Y`
/// with a directed path `X -> .. -> Y`, and no arrowhead at a node that also
/// has an undirected edge.
pub fn is_ancestral(g: &MixedGraph) -> bool {
    let n = g.n();
    if g.has_circles() {
        return false;
    }
    let anc: Vec<NodeSet> = (0..n).map(|v| g.ancestors_of_set(NodeSet::singleton(v))).collect();
    for x in 0..n {
        let into_x = g.arrows_into(x);
        for y in into_x.iter() {
            if anc[y].contains(x) {
                return false;
            }
        }
        let undirected = g
            .neighbors(x)
            .iter()
            .any(|y| g.mark_at(x, y) == Some(EndMark::Tail) && g.mark_at(y, x) == Some(EndMark::Tail));
        if undirected && !into_x.is_empty() {
            return false;
        }
    }
    true
}

/// True iff every non-adjacent pair is m-separated by some subset of the
/// other nodes (exhaustive search).
pub fn is_maximal(g: &MixedGraph) -> bool {
    let view = SeparationView::from_mixed(g);
    let n = g.n();
    let all = g.nodes();
    for x in 0..n {
        for y in x + 1..n {
            if g.is_adjacent(x, y) {
                continue;
            }
            let rest = all.without(x).without(y);
            if !rest.subsets().any(|z| !view.connected(x, y, z)) {
                return false;
            }
        }
    }
    true
}
