use std::collections::BTreeSet;

use crate::nodeset::NodeSet;
use crate::oracle::{CiFact, IndependenceOracle};
use crate::statements::{CausalAtom, StatementList, Status};

/// `(z, z_k, y)`: `z` blocks a path between `z_k` and `y`.
pub type BlockingPremise = (usize, usize, usize);

/// How consecutive nodes of a candidate sequence are shown non-separated.
#[derive(Clone, Copy)]
pub enum NonSeparation<'a> {
    /// No separating set was recorded for the pair.
    NoSepset,
    /// The pair is dependent given every subset of the fact's conditioning
    /// set without the pair itself.
    Strict(&'a dyn IndependenceOracle),
}

/// Finds premises `(Z, Z_k, Y)` for every recorded minimal independence
/// `X ⫫ Y | [Z]` (both ways round) with a sequence `[X, Z_1, .., Z_k, Z, Y]`,
/// `k ≥ 1`, drawn from `Z`, whose consecutive nodes are non-separated and
/// whose interior nodes `Z_i` cause neither neighbour.
///
/// Sequences are explored depth-first in node-index order. Premises already
/// implied by the list are skipped.
pub fn find_inferred_blocking_nodes(
    statements: &StatementList,
    ci_facts: &[CiFact],
    mode: NonSeparation<'_>,
) -> Vec<BlockingPremise> {
    let separated: BTreeSet<(usize, usize)> = ci_facts
        .iter()
        .filter(|f| f.independent)
        .map(|f| (f.x.min(f.y), f.x.max(f.y)))
        .collect();
    let mut found = BTreeSet::new();
    for fact in ci_facts.iter().filter(|f| f.independent && f.minimal) {
        let ctx = Search {
            statements,
            separated: &separated,
            mode,
            z: fact.z,
        };
        for (a, b) in [(fact.x, fact.y), (fact.y, fact.x)] {
            let mut path = vec![a];
            ctx.extend(&mut path, b, &mut found);
        }
    }
    found
        .into_iter()
        .filter(|&(z, z_k, y)| !implied(statements, z, z_k, y))
        .collect()
}

struct Search<'a> {
    statements: &'a StatementList,
    separated: &'a BTreeSet<(usize, usize)>,
    mode: NonSeparation<'a>,
    z: NodeSet,
}

impl Search<'_> {
    fn non_separated(&self, a: usize, b: usize) -> bool {
        match self.mode {
            NonSeparation::NoSepset => !self.separated.contains(&(a.min(b), a.max(b))),
            NonSeparation::Strict(oracle) => self
                .z
                .without(a)
                .without(b)
                .subsets()
                .all(|s| !oracle.independent(a, b, s)),
        }
    }

    fn refuted(&self, s: usize, t: usize) -> bool {
        self.statements.query(CausalAtom::new(s, t)) == Status::Refuted
    }

    fn extend(&self, path: &mut Vec<usize>, b: usize, found: &mut BTreeSet<BlockingPremise>) {
        let j = path.len() - 1;
        let last = path[j];
        if j >= 2 && self.non_separated(last, b) {
            found.insert((last, path[j - 1], b));
        }
        let used: NodeSet = path.iter().copied().collect();
        for v in self.z.difference(used).iter() {
            if !self.non_separated(last, v) {
                continue;
            }
            // `last` becomes an interior node
            if j >= 1 && !(self.refuted(last, path[j - 1]) && self.refuted(last, v)) {
                continue;
            }
            path.push(v);
            self.extend(path, b, found);
            path.pop();
        }
    }
}

fn implied(statements: &StatementList, z: usize, z_k: usize, y: usize) -> bool {
    let terms = NodeSet::singleton(z_k).with(y).with(crate::statements::SEL);
    statements
        .open_disjunctions()
        .iter()
        .any(|d| d.subject == z && d.terms.is_subset(terms))
        || [z_k, y]
            .iter()
            .any(|&t| statements.query(CausalAtom::new(z, t)) == Status::Established)
        || statements.query(CausalAtom::selection(z)) == Status::Established
}
