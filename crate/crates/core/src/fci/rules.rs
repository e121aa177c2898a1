//! Orientation rules. Each pass visits every configuration once, in node
//! order, and reports whether any mark changed.

use super::paths::{circle_edge, find_discriminating_path, find_uncovered_circle_path, pd_edge, search_uncovered};
use super::FciState;
use crate::error::Result;
use crate::graph::EndMark::{self, Arrow, Circle, Tail};
use crate::nodeset::NodeSet;

impl FciState {
    fn is(&self, at: usize, other: usize, mark: EndMark) -> bool {
        self.mark(at, other) == Some(mark)
    }

    fn adjacent(&self, a: usize, b: usize) -> bool {
        self.graph.is_adjacent(a, b)
    }

    fn triple(&self, a: usize, b: usize, c: usize) -> String {
        self.path_string(&[a, b, c])
    }
}

/// Unshielded `α *-* β *-* γ` with `β` outside `Sep(α, γ)` becomes a collider.
pub(super) fn r0b(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for b in s.nodes() {
        let nb = s.neighbors(b);
        for (i, &a) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                if s.adjacent(a, c) {
                    continue;
                }
                let Some(sep) = s.sepsets.get(a, c) else {
                    continue;
                };
                if sep.contains(b) {
                    continue;
                }
                let detail = format!("collider {}", s.triple(a, b, c));
                changed |= s.orient(b, a, Arrow, "R0b", detail.clone())?;
                changed |= s.orient(b, c, Arrow, "R0b", detail)?;
            }
        }
    }
    Ok(changed)
}

/// `α *-> β o-* γ`, `α, γ` nonadjacent: `β -> γ`.
pub(super) fn r1(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for b in s.nodes() {
        for a in s.neighbors(b) {
            if !s.is(b, a, Arrow) {
                continue;
            }
            for c in s.neighbors(b) {
                if c == a || s.adjacent(a, c) || !s.is(b, c, Circle) {
                    continue;
                }
                let detail = format!("triple {}", s.triple(a, b, c));
                changed |= s.orient(b, c, Tail, "R1", detail.clone())?;
                changed |= s.orient(c, b, Arrow, "R1", detail)?;
            }
        }
    }
    Ok(changed)
}

/// `α -> β *-> γ` or `α *-> β -> γ`, with `α *-o γ`: `α *-> γ`.
pub(super) fn r2(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for a in s.nodes() {
        for c in s.neighbors(a) {
            if !s.is(c, a, Circle) {
                continue;
            }
            let via = s.neighbors(a).into_iter().find(|&b| {
                b != c
                    && s.adjacent(b, c)
                    && ((s.graph.is_directed(a, b) && s.is(c, b, Arrow))
                        || (s.is(b, a, Arrow) && s.graph.is_directed(b, c)))
            });
            if let Some(b) = via {
                let detail = format!("via {}", s.graph.label(b));
                changed |= s.orient(c, a, Arrow, "R2", detail)?;
            }
        }
    }
    Ok(changed)
}

/// `α *-> β <-* γ`, `α *-o θ o-* γ`, `α, γ` nonadjacent, `θ *-o β`: `θ *-> β`.
pub(super) fn r3(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for b in s.nodes() {
        for t in s.neighbors(b) {
            if !s.is(b, t, Circle) {
                continue;
            }
            let nb = s.neighbors(b);
            let found = nb.iter().enumerate().find_map(|(i, &a)| {
                nb[i + 1..]
                    .iter()
                    .find(|&&c| {
                        a != t
                            && c != t
                            && !s.adjacent(a, c)
                            && s.is(b, a, Arrow)
                            && s.is(b, c, Arrow)
                            && s.adjacent(t, a)
                            && s.adjacent(t, c)
                            && s.is(t, a, Circle)
                            && s.is(t, c, Circle)
                    })
                    .map(|&c| (a, c))
            });
            if let Some((a, c)) = found {
                let detail = format!("collider {}", s.triple(a, b, c));
                changed |= s.orient(b, t, Arrow, "R3", detail)?;
            }
        }
    }
    Ok(changed)
}

/// Discriminating path `<θ, .., α, β, γ>` for `β` with `β o-* γ`: `β -> γ`
/// when `β` is in `Sep(θ, γ)`, otherwise `α <-> β <-> γ`.
pub(super) fn r4(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for b in s.nodes() {
        for c in s.neighbors(b) {
            if !s.is(b, c, Circle) {
                continue;
            }
            let Some(path) = find_discriminating_path(&s.graph, b, c) else {
                continue;
            };
            let nodes = path.nodes().to_vec();
            let theta = nodes[0];
            let a = nodes[nodes.len() - 3];
            let detail = format!("path {}", s.path_string(&nodes));
            let in_sep = s.sepsets.get(theta, c).is_some_and(|z| z.contains(b));
            if in_sep {
                changed |= s.orient(b, c, Tail, "R4a", detail.clone())?;
                changed |= s.orient(c, b, Arrow, "R4a", detail)?;
            } else {
                changed |= s.orient(b, a, Arrow, "R4b", detail.clone())?;
                changed |= s.orient(b, c, Arrow, "R4b", detail.clone())?;
                changed |= s.orient(c, b, Arrow, "R4b", detail)?;
            }
        }
    }
    Ok(changed)
}

/// `α o-o β` closing an uncovered circle path `<α, γ, .., θ, β>` with
/// `α, θ` and `β, γ` nonadjacent: every edge involved becomes undirected.
pub(super) fn r5(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for a in s.nodes() {
        for b in s.neighbors(a) {
            if !circle_edge(&s.graph, a, b) {
                continue;
            }
            let Some(path) = find_uncovered_circle_path(&s.graph, (a, b)) else {
                continue;
            };
            let nodes = path.nodes().to_vec();
            let detail = format!("circle path {}", s.path_string(&nodes));
            changed |= s.orient(a, b, Tail, "R5", detail.clone())?;
            changed |= s.orient(b, a, Tail, "R5", detail.clone())?;
            for w in nodes.windows(2) {
                changed |= s.orient(w[0], w[1], Tail, "R5", detail.clone())?;
                changed |= s.orient(w[1], w[0], Tail, "R5", detail.clone())?;
            }
        }
    }
    Ok(changed)
}

/// `α - β o-* γ`: `β -* γ`.
pub(super) fn r6(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for b in s.nodes() {
        let undirected = s
            .neighbors(b)
            .into_iter()
            .find(|&a| s.is(a, b, Tail) && s.is(b, a, Tail));
        let Some(a) = undirected else {
            continue;
        };
        for c in s.neighbors(b) {
            if c != a && s.is(b, c, Circle) {
                let detail = format!("after {} - {}", s.graph.label(a), s.graph.label(b));
                changed |= s.orient(b, c, Tail, "R6", detail)?;
            }
        }
    }
    Ok(changed)
}

/// `α -o β o-* γ`, `α, γ` nonadjacent: `β -* γ`.
pub(super) fn r7(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for b in s.nodes() {
        for a in s.neighbors(b) {
            if !(s.is(a, b, Tail) && s.is(b, a, Circle)) {
                continue;
            }
            for c in s.neighbors(b) {
                if c != a && !s.adjacent(a, c) && s.is(b, c, Circle) {
                    let detail = format!("triple {}", s.triple(a, b, c));
                    changed |= s.orient(b, c, Tail, "R7", detail)?;
                }
            }
        }
    }
    Ok(changed)
}

/// `α o-> γ` edges, as `(α, γ)`.
fn circle_arrows(s: &FciState) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in s.nodes() {
        for c in s.neighbors(a) {
            if s.is(a, c, Circle) && s.is(c, a, Arrow) {
                out.push((a, c));
            }
        }
    }
    out
}

/// `α -> β -> γ` or `α -o β -> γ`, with `α o-> γ`: `α -> γ`.
pub(super) fn r8(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for (a, c) in circle_arrows(s) {
        let via = s.neighbors(a).into_iter().find(|&b| {
            b != c && s.is(a, b, Tail) && (s.is(b, a, Arrow) || s.is(b, a, Circle)) && s.graph.is_directed(b, c)
        });
        if let Some(b) = via {
            let detail = format!("via {}", s.graph.label(b));
            changed |= s.orient(a, c, Tail, "R8", detail)?;
        }
    }
    Ok(changed)
}

/// `α o-> γ` with an uncovered p.d. path `<α, β, θ, .., γ>`, `β, γ`
/// nonadjacent: `α -> γ`.
pub(super) fn r9(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for (a, c) in circle_arrows(s) {
        let g = &s.graph;
        let mut found = None;
        for b in s.neighbors(a) {
            if b == c || g.is_adjacent(b, c) || !pd_edge(g, a, b) {
                continue;
            }
            let mut path = vec![a, b];
            if search_uncovered(g, &mut path, c, &|u, v| pd_edge(g, u, v), &mut |p| {
                found = Some(p.to_vec());
                true
            }) {
                break;
            }
        }
        if let Some(p) = found {
            let detail = format!("path {}", s.path_string(&p));
            changed |= s.orient(a, c, Tail, "R9", detail)?;
        }
    }
    Ok(changed)
}

/// Second nodes `μ` of uncovered p.d. paths from `a` to `target`.
fn first_steps(s: &FciState, a: usize, target: usize) -> NodeSet {
    let g = &s.graph;
    let mut out = NodeSet::EMPTY;
    for mu in s.neighbors(a) {
        if !pd_edge(g, a, mu) {
            continue;
        }
        if mu == target {
            out.insert(mu);
            continue;
        }
        let mut path = vec![a, mu];
        if search_uncovered(g, &mut path, target, &|u, v| pd_edge(g, u, v), &mut |_| true) {
            out.insert(mu);
        }
    }
    out
}

/// `α o-> γ`, `β -> γ <- θ`, uncovered p.d. paths from `α` to `β` and to
/// `θ` leaving `α` through distinct nonadjacent `μ` and `ω`: `α -> γ`.
pub(super) fn r10(s: &mut FciState) -> Result<bool> {
    let mut changed = false;
    for (a, c) in circle_arrows(s) {
        let parents: Vec<usize> = s
            .neighbors(c)
            .into_iter()
            .filter(|&p| p != a && s.graph.is_directed(p, c))
            .collect();
        if parents.len() < 2 {
            continue;
        }
        let steps: Vec<NodeSet> = parents.iter().map(|&p| first_steps(s, a, p)).collect();
        let mut hit = None;
        'search: for i in 0..parents.len() {
            for j in i + 1..parents.len() {
                for mu in steps[i].iter() {
                    for omega in steps[j].iter() {
                        if mu != omega && !s.adjacent(mu, omega) {
                            hit = Some((parents[i], parents[j], mu, omega));
                            break 'search;
                        }
                    }
                }
            }
        }
        if let Some((b, t, mu, omega)) = hit {
            let detail = format!(
                "parents {},{} via {},{}",
                s.graph.label(b),
                s.graph.label(t),
                s.graph.label(mu),
                s.graph.label(omega)
            );
            changed |= s.orient(a, c, Tail, "R10", detail)?;
        }
    }
    Ok(changed)
}
