//! Path searches used by the orientation rules.

use std::collections::VecDeque;

use crate::graph::{EndMark, MixedGraph, Path};

/// `u - v` may be traversed from `u` to `v` on a potentially directed path:
/// no arrowhead at `u`, no tail at `v`.
pub(crate) fn pd_edge(g: &MixedGraph, u: usize, v: usize) -> bool {
    g.mark_at(u, v).is_some_and(|m| m != EndMark::Arrow) && g.mark_at(v, u).is_some_and(|m| m != EndMark::Tail)
}

pub(crate) fn circle_edge(g: &MixedGraph, u: usize, v: usize) -> bool {
    g.mark_at(u, v) == Some(EndMark::Circle) && g.mark_at(v, u) == Some(EndMark::Circle)
}

/// Depth-first extension of `path` to `to` along edges accepted by
/// `edge_ok`, keeping every consecutive triple unshielded. Stops at the
/// first complete path `accept` approves.
pub(crate) fn search_uncovered(
    g: &MixedGraph,
    path: &mut Vec<usize>,
    to: usize,
    edge_ok: &dyn Fn(usize, usize) -> bool,
    accept: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let last = *path.last().unwrap();
    for v in g.neighbors(last).iter() {
        if path.contains(&v) || !edge_ok(last, v) {
            continue;
        }
        if path.len() >= 2 && g.is_adjacent(path[path.len() - 2], v) {
            continue;
        }
        path.push(v);
        let done = if v == to {
            accept(path)
        } else {
            search_uncovered(g, path, to, edge_ok, accept)
        };
        path.pop();
        if done {
            return true;
        }
    }
    false
}

/// A discriminating path `<θ, .., α, β, γ>` for `beta`: `θ` and `γ`
/// nonadjacent, every node strictly between `θ` and `β` a collider on the
/// path and a parent of `γ`. Breadth-first, so the shortest is returned.
pub fn find_discriminating_path(g: &MixedGraph, beta: usize, gamma: usize) -> Option<Path> {
    if !g.is_adjacent(beta, gamma) {
        return None;
    }
    let arrow = |at: usize, other: usize| g.mark_at(at, other) == Some(EndMark::Arrow);
    // partial paths run backwards from α: [α, .., current]
    let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
    for alpha in g.neighbors(beta).iter() {
        if alpha != gamma && arrow(alpha, beta) && g.is_directed(alpha, gamma) {
            queue.push_back(vec![alpha]);
        }
    }
    while let Some(back) = queue.pop_front() {
        let v = *back.last().unwrap();
        for p in g.neighbors(v).iter() {
            if p == beta || p == gamma || back.contains(&p) || !arrow(v, p) {
                continue;
            }
            if !g.is_adjacent(p, gamma) {
                let mut nodes: Vec<usize> = back.iter().rev().copied().collect();
                nodes.insert(0, p);
                nodes.extend([beta, gamma]);
                return Some(Path::from_vec_unchecked(nodes));
            }
            if arrow(p, v) && g.is_directed(p, gamma) {
                let mut next = back.clone();
                next.push(p);
                queue.push_back(next);
            }
        }
    }
    None
}

/// Any uncovered potentially directed path from `from` to `to`.
pub fn find_uncovered_pd_path(g: &MixedGraph, from: usize, to: usize) -> Option<Path> {
    if from == to {
        return None;
    }
    let mut path = vec![from];
    let mut found = None;
    search_uncovered(g, &mut path, to, &|u, v| pd_edge(g, u, v), &mut |p| {
        found = Some(p.to_vec());
        true
    });
    found.map(Path::from_vec_unchecked)
}

/// For a circle edge `a o-o b`, an uncovered circle path `<a, c, .., d, b>`
/// with `a, d` and `b, c` nonadjacent.
pub fn find_uncovered_circle_path(g: &MixedGraph, edge: (usize, usize)) -> Option<Path> {
    let (a, b) = edge;
    if !circle_edge(g, a, b) {
        return None;
    }
    let mut found = None;
    for c in g.neighbors(a).iter() {
        if c == b || g.is_adjacent(b, c) || !circle_edge(g, a, c) {
            continue;
        }
        let mut path = vec![a, c];
        let hit = search_uncovered(g, &mut path, b, &|u, v| circle_edge(g, u, v), &mut |p| {
            if g.is_adjacent(a, p[p.len() - 2]) {
                return false;
            }
            found = Some(p.to_vec());
            true
        });
        if hit {
            break;
        }
    }
    found.map(Path::from_vec_unchecked)
}
