//! Reference implementation of FCI with the full orientation rule set,
//! including the tail rules for selection bias.

mod paths;
mod rules;

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{EndMark, MixedGraph};
use crate::nodeset::NodeSet;
use crate::oracle::{find_minimal_independence, CachedOracle, IndependenceOracle};

pub use paths::{find_discriminating_path, find_uncovered_circle_path, find_uncovered_pd_path};

/// Names of every orientation rule, in table order.
pub const RULES: [&str; 12] = [
    "R0b", "R1", "R2", "R3", "R4a", "R4b", "R5", "R6", "R7", "R8", "R9", "R10",
];

/// Separating sets found during skeleton search, keyed by `(min, max)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SepsetTable {
    sets: BTreeMap<(usize, usize), NodeSet>,
}

impl SepsetTable {
    pub fn insert(&mut self, a: usize, b: usize, z: NodeSet) {
        self.sets.insert((a.min(b), a.max(b)), z);
    }

    pub fn get(&self, a: usize, b: usize) -> Option<NodeSet> {
        self.sets.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), NodeSet)> + '_ {
        self.sets.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// One mark change.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleApplication {
    pub rule: &'static str,
    pub at: usize,
    pub other: usize,
    pub mark: EndMark,
    /// The edge after the change, written from `at` for tails and towards
    /// `at` for arrowheads, e.g. `Z -> Y`.
    pub edge: String,
    pub detail: String,
}

impl fmt::Display for RuleApplication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: orient {}", self.rule, self.edge)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FciConfig {
    pub max_cond: Option<usize>,
    /// Nonzero seeds permute the order rules visit nodes in.
    pub shuffle_seed: u64,
}

/// Working state: the PAG under construction, sepsets and the rule log.
#[derive(Debug, Clone)]
pub struct FciState {
    pub graph: MixedGraph,
    pub sepsets: SepsetTable,
    pub log: Vec<RuleApplication>,
    order: Vec<usize>,
}

impl FciState {
    pub fn new(graph: MixedGraph, sepsets: SepsetTable) -> Self {
        let order = (0..graph.n()).collect();
        FciState {
            graph,
            sepsets,
            log: Vec::new(),
            order,
        }
    }

    fn shuffle(&mut self, seed: u64) {
        if seed != 0 {
            self.order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
    }

    fn nodes(&self) -> Vec<usize> {
        self.order.clone()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        let adj = self.graph.neighbors(v);
        self.order.iter().copied().filter(|&u| adj.contains(u)).collect()
    }

    fn mark(&self, at: usize, other: usize) -> Option<EndMark> {
        self.graph.mark_at(at, other)
    }

    /// Sets the mark at `at` on the edge to `other`. Only circles change;
    /// rewriting a committed mark differently is an error.
    fn orient(&mut self, at: usize, other: usize, mark: EndMark, rule: &'static str, detail: String) -> Result<bool> {
        match self.mark(at, other) {
            Some(m) if m == mark => Ok(false),
            Some(EndMark::Circle) => {
                self.graph.set_mark(at, other, mark)?;
                let edge = match mark {
                    EndMark::Arrow => self.graph.edge_string(other, at),
                    _ => self.graph.edge_string(at, other),
                }
                .unwrap_or_default();
                self.log.push(RuleApplication {
                    rule,
                    at,
                    other,
                    mark,
                    edge,
                    detail,
                });
                Ok(true)
            }
            Some(m) => {
                let recent: Vec<String> = self.log.iter().rev().take(5).map(|a| a.to_string()).collect();
                Err(Error::Internal(format!(
                    "{rule} wants {} at {} on {} but it is {}; recent: {}",
                    mark.symbol(),
                    self.graph.label(at),
                    self.graph.edge_string(at, other).unwrap_or_default(),
                    m.symbol(),
                    recent.join("; ")
                )))
            }
            None => Err(Error::Internal(format!("{rule} on a missing edge"))),
        }
    }

    fn path_string(&self, nodes: &[usize]) -> String {
        nodes.iter().map(|&v| self.graph.label(v)).collect::<Vec<_>>().join(",")
    }

    pub fn rule_counts(&self) -> BTreeMap<&'static str, usize> {
        let mut counts: BTreeMap<&'static str, usize> = RULES.iter().map(|&r| (r, 0)).collect();
        for a in &self.log {
            *counts.entry(a.rule).or_default() += 1;
        }
        counts
    }

    pub fn log_text(&self) -> String {
        self.log.iter().map(|a| format!("{a}\n")).collect()
    }
}

#[derive(Debug, Clone)]
pub struct FciOutput {
    pub pag: MixedGraph,
    pub state: FciState,
    pub oracle_query_count: usize,
}

impl FciOutput {
    pub fn log(&self) -> &[RuleApplication] {
        &self.state.log
    }

    pub fn rule_counts(&self) -> BTreeMap<&'static str, usize> {
        self.state.rule_counts()
    }
}

/// Skeleton search: every pair, conditioning sets by increasing size.
pub fn skeleton<O: IndependenceOracle + ?Sized>(oracle: &O, max_cond: usize) -> Result<(MixedGraph, SepsetTable)> {
    let n = oracle.n();
    let mut g = MixedGraph::complete_circle(oracle.variables().to_vec())?;
    let mut sepsets = SepsetTable::default();
    for x in 0..n {
        for y in x + 1..n {
            if let Some(f) = find_minimal_independence(oracle, x, y, max_cond) {
                g.remove_edge(x, y);
                sepsets.insert(x, y, f.z);
            }
        }
    }
    Ok((g, sepsets))
}

pub fn run_fci<O: IndependenceOracle + ?Sized>(oracle: &O) -> Result<FciOutput> {
    run_fci_with(oracle, &FciConfig::default())
}

pub fn run_fci_with<O: IndependenceOracle + ?Sized>(oracle: &O, config: &FciConfig) -> Result<FciOutput> {
    let n = oracle.n();
    if n == 0 {
        return Err(Error::invalid("oracle has no variables"));
    }
    let cached = CachedOracle::new(oracle);
    let (g, sepsets) = skeleton(&cached, config.max_cond.unwrap_or(n))?;
    let mut state = FciState::new(g, sepsets);
    state.shuffle(config.shuffle_seed);
    orient(&mut state)?;
    Ok(FciOutput {
        pag: state.graph.clone(),
        state,
        oracle_query_count: cached.underlying_calls(),
    })
}

/// Runs the orientation phases on a skeleton with sepsets.
pub fn orient(state: &mut FciState) -> Result<()> {
    rules::r0b(state)?;
    fixpoint(state, &[rules::r1, rules::r2, rules::r3, rules::r4])?;
    fixpoint(state, &[rules::r5])?;
    fixpoint(state, &[rules::r6, rules::r7])?;
    fixpoint(state, &[rules::r8, rules::r9, rules::r10])?;
    Ok(())
}

type Rule = fn(&mut FciState) -> Result<bool>;

fn fixpoint(state: &mut FciState, rules: &[Rule]) -> Result<()> {
    loop {
        let mut changed = false;
        for rule in rules {
            changed |= rule(state)?;
        }
        if !changed {
            return Ok(());
        }
    }
}

#[cfg(test)]
mod tests;
