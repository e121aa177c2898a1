use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::oracle::{CiFact, DagOracle};
use crate::statements::{CausalAtom, StatementList, Target};

/// Whether `atom` is true in the oracle's DAG: a directed path from the
/// source to the target node, or to some selection node.
pub fn holds(oracle: &DagOracle, atom: CausalAtom) -> bool {
    let dag = oracle.dag();
    let from = oracle.dag_index(atom.source);
    match atom.target {
        Target::Node(v) => dag.has_directed_path(from, oracle.dag_index(v)),
        Target::Selection => dag.selection().iter().any(|s| dag.has_directed_path(from, s)),
    }
}

/// Established atoms that are false, refuted atoms that are true, and open
/// disjunctions with no true term.
pub fn check_statements(oracle: &DagOracle, list: &StatementList) -> Vec<String> {
    let mut out = Vec::new();
    for atom in list.established() {
        if !holds(oracle, atom) {
            out.push(format!("established but false: {}", list.atom_string(atom)));
        }
    }
    for atom in list.refuted() {
        if holds(oracle, atom) {
            out.push(format!("refuted but true: {}", list.atom_string(atom)));
        }
    }
    for d in list.open_disjunctions() {
        let any = d.targets().any(|t| {
            holds(
                oracle,
                CausalAtom {
                    source: d.subject,
                    target: t,
                },
            )
        });
        if !any {
            out.push(format!("no true term: {}", list.disjunct_string(d.subject, d.terms)));
        }
    }
    out
}

/// A seeded random subset of `facts` holding `fraction` of them, rounded
/// down, in shuffled order.
pub fn replay_subset(facts: &[CiFact], fraction: f64, seed: u64) -> Vec<CiFact> {
    let mut all = facts.to_vec();
    all.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    all.truncate((facts.len() as f64 * fraction) as usize);
    all
}
