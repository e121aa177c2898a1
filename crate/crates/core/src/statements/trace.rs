use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::StatementList;
use crate::nodeset::NodeSet;
use crate::oracle::CiFact;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepKind {
    Premise,
    MinimalIndependence,
    DestroyerDependence,
    InferredBlocking,
    Substitute,
    ReduceEliminate,
    ReduceIrreflexive,
    ReduceAcyclic,
    ReduceTransitive,
}

impl StepKind {
    pub fn name(self) -> &'static str {
        match self {
            StepKind::Premise => "premise",
            StepKind::MinimalIndependence => "minimal-independence",
            StepKind::DestroyerDependence => "destroyer-dependence",
            StepKind::InferredBlocking => "inferred-blocking",
            StepKind::Substitute => "substitute",
            StepKind::ReduceEliminate => "reduce-eliminate",
            StepKind::ReduceIrreflexive => "reduce-irreflexive",
            StepKind::ReduceAcyclic => "reduce-acyclic",
            StepKind::ReduceTransitive => "reduce-transitive",
        }
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What a derivation ultimately rests on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Evidence {
    Independence(CiFact),
    Destroyer { fact: CiFact, w: usize },
    Blocking { z: usize, z_k: usize, y: usize },
    Premise(String),
}

impl Evidence {
    pub fn describe(&self, labels: &[String]) -> String {
        match self {
            Evidence::Independence(f) => f.describe(labels),
            Evidence::Destroyer { fact, w } => {
                format!("destroyer {} of {}", labels[*w], fact.describe(labels))
            }
            Evidence::Blocking { z, z_k, y } => format!(
                "blocking node {} between {} and {}",
                labels[*z], labels[*z_k], labels[*y]
            ),
            Evidence::Premise(text) => format!("premise {text}"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(super) enum Output {
    Negative { source: usize, target: usize },
    Disjunct { subject: usize, terms: NodeSet },
}

#[derive(Debug, Clone)]
pub(super) struct TraceNode {
    pub kind: StepKind,
    pub inputs: Vec<usize>,
    pub evidence: Option<usize>,
    pub output: Output,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivationNode {
    pub id: usize,
    pub kind: StepKind,
    pub statement: String,
    pub inputs: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evidence: Option<String>,
}

/// The steps behind one statement, inputs before outputs; the last node is
/// the statement itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub nodes: Vec<DerivationNode>,
    #[serde(skip)]
    leaves: Vec<Evidence>,
}

impl Derivation {
    pub fn root(&self) -> &DerivationNode {
        self.nodes.last().expect("derivations are nonempty")
    }

    /// Distinct evidence items, in order of first use.
    pub fn leaves(&self) -> &[Evidence] {
        &self.leaves
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for node in &self.nodes {
            out.push_str(&format!("#{} {} [{}]", node.id, node.statement, node.kind));
            if let Some(ev) = &node.evidence {
                out.push_str(&format!(" from {ev}"));
            }
            if !node.inputs.is_empty() {
                let refs: Vec<String> = node.inputs.iter().map(|i| format!("#{i}")).collect();
                out.push_str(&format!(" from {}", refs.join(",")));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("derivation serializes")
    }
}

pub(super) fn statement_string(list: &StatementList, output: Output) -> String {
    match output {
        Output::Negative { source, target } => {
            format!("{} =/> {}", list.label(source), list.label(target))
        }
        Output::Disjunct { subject, terms } => list.disjunct_string(subject, terms),
    }
}

pub(super) fn extract(list: &StatementList, root: usize) -> Derivation {
    let mut seen = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        if seen.insert(id) {
            stack.extend(&list.traces[id].inputs);
        }
    }
    // inputs always predate their outputs, so id order is topological
    let order: Vec<usize> = seen.into_iter().collect();
    let local = |id: usize| order.binary_search(&id).unwrap();
    let mut leaves = Vec::new();
    let nodes = order
        .iter()
        .enumerate()
        .map(|(i, &id)| {
            let t = &list.traces[id];
            let evidence = t.evidence.map(|e| {
                let ev = &list.evidence[e];
                if !leaves.contains(ev) {
                    leaves.push(ev.clone());
                }
                ev.describe(list.labels())
            });
            DerivationNode {
                id: i,
                kind: t.kind,
                statement: statement_string(list, t.output),
                inputs: t.inputs.iter().map(|&j| local(j)).collect(),
                evidence,
            }
        })
        .collect();
    Derivation { nodes, leaves }
}
