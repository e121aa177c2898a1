//! Seeded random-DAG campaigns comparing LoCI, FCI and, on small graphs,
//! brute-force equivalence-class enumeration.

mod soundness;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fci::{self, RULES};
use crate::graph::format::{write_dag, write_mixed};
use crate::graph::{invariant_marks, project_to_mag, CausalDag, MixedGraph, NodeRole};
use crate::loci::{self, LociConfig};
use crate::oracle::DagOracle;

pub use soundness::{check_statements, holds, replay_subset};

/// Shape of one random DAG.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DagShape {
    pub n_observed: usize,
    pub n_latent: usize,
    pub n_selection: usize,
    pub edge_probability: f64,
    /// Selection nodes are childless; otherwise they may have observed children.
    pub selection_sinks: bool,
}

/// Observed nodes `V1..` in topological order with forward edges at the
/// given probability. Each latent `L*` is a root with at least two observed
/// children and each selection node `S*` has at least one observed parent,
/// unless the edge probability is zero.
pub fn random_dag(shape: &DagShape, seed: u64) -> Result<CausalDag> {
    let p = shape.edge_probability;
    if !(0.0..1.0).contains(&p) {
        return Err(Error::invalid(format!("edge probability {p} outside [0, 1)")));
    }
    if shape.n_latent > 0 && shape.n_observed < 2 {
        return Err(Error::invalid("latent nodes need two observed nodes"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = shape.n_observed;
    let mut labels: Vec<String> = (1..=n).map(|i| format!("V{i}")).collect();
    let mut roles = vec![NodeRole::Observed; n];
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    let observed: Vec<usize> = (0..n).collect();
    for k in 0..shape.n_latent {
        let l = labels.len();
        labels.push(format!("L{}", k + 1));
        roles.push(NodeRole::Latent);
        if p == 0.0 {
            continue;
        }
        let mut children: Vec<usize> = observed.choose_multiple(&mut rng, 2).copied().collect();
        for &v in &observed {
            if !children.contains(&v) && rng.gen_bool(p / 2.0) {
                children.push(v);
            }
        }
        edges.extend(children.into_iter().map(|c| (l, c)));
    }
    for k in 0..shape.n_selection {
        let s = labels.len();
        labels.push(format!("S{}", k + 1));
        roles.push(NodeRole::Selection);
        if p == 0.0 || n == 0 {
            continue;
        }
        let first = *observed.choose(&mut rng).unwrap();
        edges.push((first, s));
        for &v in &observed {
            if v != first && rng.gen_bool(p / 2.0) {
                edges.push((v, s));
            }
        }
        if !shape.selection_sinks {
            let parents: Vec<usize> = edges.iter().filter(|e| e.1 == s).map(|e| e.0).collect();
            let last = parents.iter().max().copied().unwrap_or(0);
            for v in last + 1..n {
                if rng.gen_bool(p / 2.0) {
                    edges.push((s, v));
                }
            }
        }
    }
    CausalDag::new(labels, roles, &edges)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CampaignSpec {
    pub trials: usize,
    /// Inclusive ranges.
    pub n_observed: (usize, usize),
    pub n_latent: (usize, usize),
    pub n_selection: (usize, usize),
    /// Each trial draws one of these.
    pub edge_probabilities: Vec<f64>,
    pub seed: u64,
    pub selection_sinks: bool,
    /// Graphs with at most this many observed nodes are also checked
    /// against the enumerated equivalence class.
    pub brute_force_max_observed: usize,
    pub loci: LociConfig,
}

impl Default for CampaignSpec {
    fn default() -> Self {
        CampaignSpec {
            trials: 1000,
            n_observed: (4, 8),
            n_latent: (0, 3),
            n_selection: (0, 2),
            edge_probabilities: vec![0.2, 0.35, 0.5],
            seed: 1,
            selection_sinks: true,
            brute_force_max_observed: 5,
            loci: LociConfig::default(),
        }
    }
}

impl CampaignSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi)) in [
            ("n_observed", self.n_observed),
            ("n_latent", self.n_latent),
            ("n_selection", self.n_selection),
        ] {
            if lo > hi {
                return Err(Error::invalid(format!("{name} range {lo}..={hi} is empty")));
            }
        }
        if self.n_observed.0 < 2 {
            return Err(Error::invalid("need at least two observed nodes"));
        }
        if self.edge_probabilities.is_empty() {
            return Err(Error::invalid("no edge probabilities"));
        }
        if let Some(p) = self.edge_probabilities.iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(Error::invalid(format!("edge probability {p} outside [0, 1)")));
        }
        Ok(())
    }

    /// Seed and shape of trial `index`; independent of the other trials.
    pub fn trial(&self, index: usize) -> (u64, DagShape) {
        let seed = self
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(index as u64)
            .wrapping_add(1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |(lo, hi): (usize, usize)| rng.gen_range(lo..=hi);
        let n_observed = draw(self.n_observed);
        let n_latent = draw(self.n_latent);
        let n_selection = draw(self.n_selection);
        let edge_probability = *self.edge_probabilities.choose(&mut rng).unwrap();
        let shape = DagShape {
            n_observed,
            n_latent,
            n_selection,
            edge_probability,
            selection_sinks: self.selection_sinks,
        };
        (seed, shape)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Equal,
    Mismatch {
        loci: String,
        fci: String,
        first_difference: String,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub seed: u64,
    pub dag: String,
    #[serde(flatten)]
    pub verdict: Verdict,
    /// `Some(true)` when both PAGs equal the enumerated invariant marks.
    pub brute_force: Option<bool>,
    pub soundness_violations: Vec<String>,
    pub loci_queries: usize,
    pub fci_queries: usize,
    pub blocking_premises: usize,
    pub rules: BTreeMap<&'static str, usize>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Equal && self.brute_force != Some(false) && self.soundness_violations.is_empty()
    }
}

/// Runs LoCI and FCI on the DAG's oracle, checks the statements against the
/// DAG, and compares with brute force when the graph is small enough.
pub fn run_trial(dag: &CausalDag, config: &LociConfig, brute_force_max_observed: usize) -> TrialOutcome {
    let start = Instant::now();
    let oracle = DagOracle::new(dag);
    let mut outcome = TrialOutcome {
        index: 0,
        seed: 0,
        dag: write_dag(dag),
        verdict: Verdict::Equal,
        brute_force: None,
        soundness_violations: Vec::new(),
        loci_queries: 0,
        fci_queries: 0,
        blocking_premises: 0,
        rules: BTreeMap::new(),
        elapsed: Duration::ZERO,
    };
    let result = (|| -> Result<()> {
        let l = loci::run(&oracle, config)?;
        let f = fci::run_fci(&oracle)?;
        outcome.loci_queries = l.oracle_query_count;
        outcome.fci_queries = f.oracle_query_count;
        outcome.blocking_premises = l.blocking_premises.len();
        outcome.rules = f.rule_counts();
        outcome.soundness_violations = check_statements(&oracle, &l.statements);
        if let Some(diff) = l.pag.first_difference(&f.pag) {
            outcome.verdict = Verdict::Mismatch {
                loci: write_mixed(&l.pag),
                fci: write_mixed(&f.pag),
                first_difference: diff,
            };
        }
        if dag.observed().len() <= brute_force_max_observed {
            let truth = ground_truth(dag)?;
            outcome.brute_force = Some(l.pag == truth && f.pag == truth);
        }
        Ok(())
    })();
    if let Err(e) = result {
        outcome.verdict = Verdict::Error { message: e.to_string() };
    }
    outcome.elapsed = start.elapsed();
    outcome
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryStats {
    pub mean: f64,
    pub max: usize,
}

impl QueryStats {
    fn of(counts: impl Iterator<Item = usize> + Clone) -> Self {
        let n = counts.clone().count().max(1);
        QueryStats {
            mean: counts.clone().sum::<usize>() as f64 / n as f64,
            max: counts.max().unwrap_or(0),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CampaignReport {
    pub spec: CampaignSpec,
    pub trials: Vec<TrialOutcome>,
    pub equal: usize,
    pub mismatches: usize,
    pub errors: usize,
    pub brute_force_checked: usize,
    pub brute_force_failures: usize,
    pub unsound_trials: usize,
    pub rules: BTreeMap<&'static str, usize>,
    pub loci_queries: QueryStats,
    pub fci_queries: QueryStats,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CampaignReport {
    pub fn all_passed(&self) -> bool {
        self.trials.iter().all(TrialOutcome::passed)
    }

    /// Rules that never fired.
    pub fn uncovered_rules(&self) -> Vec<&'static str> {
        RULES.iter().copied().filter(|r| self.rules[r] == 0).collect()
    }

    pub fn failures(&self) -> impl Iterator<Item = &TrialOutcome> {
        self.trials.iter().filter(|t| !t.passed())
    }

    pub fn summary(&self) -> String {
        let rules: Vec<String> = RULES.iter().map(|r| format!("{r}={}", self.rules[r])).collect();
        format!(
            "trials {} equal {} mismatch {} error {} brute-force {}/{} unsound {}\nrules {}\nqueries loci mean {:.1} max {} / fci mean {:.1} max {}",
            self.trials.len(),
            self.equal,
            self.mismatches,
            self.errors,
            self.brute_force_checked - self.brute_force_failures,
            self.brute_force_checked,
            self.unsound_trials,
            rules.join(" "),
            self.loci_queries.mean,
            self.loci_queries.max,
            self.fci_queries.mean,
            self.fci_queries.max,
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs every trial in parallel; the report is ordered by trial index.
pub fn run_campaign(spec: &CampaignSpec) -> Result<CampaignReport> {
    spec.validate()?;
    let start = Instant::now();
    let trials: Vec<TrialOutcome> = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let (seed, shape) = spec.trial(i);
            let mut out = match random_dag(&shape, seed) {
                Ok(dag) => run_trial(&dag, &spec.loci, spec.brute_force_max_observed),
                Err(e) => error_outcome(e),
            };
            out.index = i;
            out.seed = seed;
            out
        })
        .collect();
    Ok(aggregate(spec.clone(), trials, start.elapsed()))
}

fn error_outcome(e: Error) -> TrialOutcome {
    TrialOutcome {
        index: 0,
        seed: 0,
        dag: String::new(),
        verdict: Verdict::Error { message: e.to_string() },
        brute_force: None,
        soundness_violations: Vec::new(),
        loci_queries: 0,
        fci_queries: 0,
        blocking_premises: 0,
        rules: BTreeMap::new(),
        elapsed: Duration::ZERO,
    }
}

fn aggregate(spec: CampaignSpec, trials: Vec<TrialOutcome>, elapsed: Duration) -> CampaignReport {
    let mut rules: BTreeMap<&'static str, usize> = RULES.iter().map(|&r| (r, 0)).collect();
    for t in &trials {
        for (r, c) in &t.rules {
            *rules.entry(r).or_default() += c;
        }
    }
    let count = |f: &dyn Fn(&TrialOutcome) -> bool| trials.iter().filter(|t| f(t)).count();
    CampaignReport {
        equal: count(&|t| t.verdict == Verdict::Equal),
        mismatches: count(&|t| matches!(t.verdict, Verdict::Mismatch { .. })),
        errors: count(&|t| matches!(t.verdict, Verdict::Error { .. })),
        brute_force_checked: count(&|t| t.brute_force.is_some()),
        brute_force_failures: count(&|t| t.brute_force == Some(false)),
        unsound_trials: count(&|t| !t.soundness_violations.is_empty()),
        rules,
        loci_queries: QueryStats::of(trials.iter().map(|t| t.loci_queries)),
        fci_queries: QueryStats::of(trials.iter().map(|t| t.fci_queries)),
        spec,
        trials,
        elapsed,
    }
}

/// Trials where `rule` fired, as DAG text.
pub fn mine_rule<'a>(report: &'a CampaignReport, rule: &str) -> Vec<&'a TrialOutcome> {
    report
        .trials
        .iter()
        .filter(|t| t.rules.get(rule).is_some_and(|&c| c > 0))
        .collect()
}

/// The PAG both algorithms should produce, when the observed set is small
/// enough to enumerate.
pub fn ground_truth(dag: &CausalDag) -> Result<MixedGraph> {
    invariant_marks(&project_to_mag(dag)?)
}
