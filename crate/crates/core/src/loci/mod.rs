//! The LoCI pipeline: minimal-independence search, statement generation,
//! closure, inferred blocking nodes and PAG reconstruction.

mod blocking;

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EndMark, MixedGraph};
use crate::nodeset::NodeSet;
use crate::oracle::{find_destroyers, find_minimal_independence, CachedOracle, CiFact, IndependenceOracle};
use crate::statements::{CausalAtom, Derivation, StatementList, Status, SEL};

pub use blocking::{find_inferred_blocking_nodes, BlockingPremise, NonSeparation};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct LociConfig {
    /// Largest conditioning set searched; `None` searches all sizes.
    pub max_cond: Option<usize>,
    /// Stop after ingesting this many independence facts.
    pub anytime_budget: Option<usize>,
    pub keep_wide_disjunctions: bool,
    /// Nonzero seeds shuffle the pair order.
    pub seed: u64,
    /// Close once after all pairs instead of after each.
    pub batch_closure: bool,
    /// Check blocking-node sequences with explicit dependence queries.
    pub strict_blocking: bool,
    /// Turn `X ⫫ Y | ∅` into `X ⇏ Y` and `Y ⇏ X`. Sound when selection
    /// nodes have no children.
    pub empty_set_negatives: bool,
}

impl Default for LociConfig {
    fn default() -> Self {
        LociConfig {
            max_cond: None,
            anytime_budget: None,
            keep_wide_disjunctions: false,
            seed: 0,
            batch_closure: false,
            strict_blocking: false,
            empty_set_negatives: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LociResult {
    pub statements: StatementList,
    pub pag: MixedGraph,
    /// The minimal independencies found, with destroyers.
    pub ci_facts: Vec<CiFact>,
    pub blocking_premises: Vec<BlockingPremise>,
    /// Distinct queries that reached the oracle.
    pub oracle_query_count: usize,
    /// Marks read off the list before any blocking premise was added.
    pub pag_before_blocking: MixedGraph,
    /// False when a budget or replay cut the search short.
    pub complete: bool,
}

impl LociResult {
    pub fn derivation_of(&self, atom: CausalAtom) -> Result<Derivation> {
        derivation_of(self, atom)
    }
}

pub fn derivation_of(result: &LociResult, atom: CausalAtom) -> Result<Derivation> {
    result.statements.derivation(atom)
}

fn ingest(list: &mut StatementList, fact: &CiFact, config: &LociConfig) -> Result<()> {
    if fact.minimal {
        list.assert_from_minimal_independence(fact)?;
    }
    for w in fact.destroyers.iter() {
        list.assert_from_destroyer(fact, w)?;
    }
    if config.empty_set_negatives && fact.z.is_empty() {
        list.assert_from_empty_independence(fact)?;
    }
    Ok(())
}

fn pairs(n: usize, seed: u64) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    if seed != 0 {
        out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    out
}

/// Runs LoCI against an oracle.
pub fn run<O: IndependenceOracle + ?Sized>(oracle: &O, config: &LociConfig) -> Result<LociResult> {
    let n = oracle.n();
    if n == 0 {
        return Err(Error::invalid("oracle has no variables"));
    }
    let cached = CachedOracle::new(oracle);
    let labels = oracle.variables().to_vec();
    let mut list = StatementList::with_options(labels.clone(), config.keep_wide_disjunctions)?;
    let max_cond = config.max_cond.unwrap_or(n);
    let mut facts = Vec::new();
    let mut complete = max_cond + 2 >= n;
    for (x, y) in pairs(n, config.seed) {
        if config.anytime_budget.is_some_and(|b| facts.len() >= b) {
            complete = false;
            break;
        }
        let Some(mut fact) = find_minimal_independence(&cached, x, y, max_cond) else {
            continue;
        };
        find_destroyers(&cached, &mut fact)?;
        ingest(&mut list, &fact, config)?;
        facts.push(fact);
        if !config.batch_closure {
            list.close()?;
        }
    }
    list.close()?;
    let mode = if config.strict_blocking {
        NonSeparation::Strict(&cached)
    } else {
        NonSeparation::NoSepset
    };
    finish(list, facts, &labels, complete, mode, cached.underlying_calls())
}

/// Replays recorded facts in the given order, without an oracle.
///
/// Dependence facts `X ⫫̸ Y | Z + w` matching a minimal independence
/// `X ⫫ Y | [Z]` count as destroyer evidence. The blocking-node pass runs
/// only when `complete` says the facts cover every pair.
pub fn run_replay(variables: &[String], facts: &[CiFact], config: &LociConfig, complete: bool) -> Result<LociResult> {
    if variables.is_empty() {
        return Err(Error::invalid("replay has no variables"));
    }
    let mut facts: Vec<CiFact> = facts.to_vec();
    let dependencies: Vec<CiFact> = facts.iter().filter(|f| !f.independent).cloned().collect();
    for f in facts.iter_mut().filter(|f| f.independent && f.minimal) {
        for d in &dependencies {
            let same_pair = (d.x, d.y) == (f.x, f.y) || (d.x, d.y) == (f.y, f.x);
            let extra = d.z.difference(f.z);
            if same_pair && f.z.is_subset(d.z) && extra.len() == 1 {
                f.destroyers = f.destroyers.union(extra);
            }
        }
    }
    facts.retain(|f| f.independent);
    let mut list = StatementList::with_options(variables.to_vec(), config.keep_wide_disjunctions)?;
    for (i, fact) in facts.iter().enumerate() {
        if config.anytime_budget.is_some_and(|b| i >= b) {
            break;
        }
        ingest(&mut list, fact, config)?;
        if !config.batch_closure {
            list.close()?;
        }
    }
    if let Some(b) = config.anytime_budget {
        facts.truncate(b);
    }
    list.close()?;
    let complete = complete && config.anytime_budget.is_none();
    finish(list, facts, variables, complete, NonSeparation::NoSepset, 0)
}

fn finish(
    mut list: StatementList,
    facts: Vec<CiFact>,
    labels: &[String],
    complete: bool,
    mode: NonSeparation<'_>,
    queries: usize,
) -> Result<LociResult> {
    let pag_before_blocking = reconstruct_pag(&list, &facts, labels)?;
    let mut premises = Vec::new();
    if complete {
        let mut seen = BTreeSet::new();
        loop {
            let fresh: Vec<BlockingPremise> = find_inferred_blocking_nodes(&list, &facts, mode)
                .into_iter()
                .filter(|p| seen.insert(*p))
                .collect();
            if fresh.is_empty() {
                break;
            }
            for &(z, z_k, y) in &fresh {
                list.assert_inferred_blocking(z, z_k, y)?;
            }
            list.close()?;
            premises.extend(fresh);
        }
    }
    let pag = reconstruct_pag(&list, &facts, labels)?;
    Ok(LociResult {
        statements: list,
        pag,
        ci_facts: facts,
        blocking_premises: premises,
        oracle_query_count: queries,
        pag_before_blocking,
        complete,
    })
}

/// Reads a PAG off a closed list: the skeleton from the separating facts,
/// a tail at `X` on `X - Y` when the list gives `X ⇒ Y`, `X ⇒ S` or exactly
/// `X ⇒ Y ∨ X ⇒ S`, and an arrowhead when it refutes both `X ⇒ Y` and `X ⇒ S`.
pub fn reconstruct_pag(statements: &StatementList, ci_facts: &[CiFact], observed: &[String]) -> Result<MixedGraph> {
    let mut g = MixedGraph::complete_circle(observed.to_vec())?;
    for f in ci_facts.iter().filter(|f| f.independent) {
        if g.is_adjacent(f.x, f.y) {
            g.remove_edge(f.x, f.y);
        }
    }
    let edges: Vec<(usize, usize)> = g.edges().map(|(a, b, _, _)| (a, b)).collect();
    for (a, b) in edges {
        for (x, y) in [(a, b), (b, a)] {
            let tail = statements.query(CausalAtom::new(x, y)) == Status::Established
                || statements.query(CausalAtom::selection(x)) == Status::Established
                || statements.has_disjunct(x, NodeSet::singleton(y).with(SEL));
            let arrow = statements.query(CausalAtom::new(x, y)) == Status::Refuted
                && statements.query(CausalAtom::selection(x)) == Status::Refuted;
            let mark = match (tail, arrow) {
                (true, true) => {
                    return Err(Error::Inconsistent {
                        atom: format!("mark at {} on {} - {}", observed[x], observed[x], observed[y]),
                        traces: mark_traces(statements, x, y),
                    })
                }
                (true, false) => EndMark::Tail,
                (false, true) => EndMark::Arrow,
                (false, false) => EndMark::Circle,
            };
            g.set_mark(x, y, mark)?;
        }
    }
    Ok(g)
}

fn mark_traces(statements: &StatementList, x: usize, y: usize) -> Vec<String> {
    [CausalAtom::new(x, y), CausalAtom::selection(x)]
        .into_iter()
        .filter_map(|a| statements.derivation(a).ok())
        .map(|d| d.render())
        .collect()
}
