//! Line-oriented graph text format, DOT export and JSON documents.
//!
//! ```text
//! # comment
//! node A
//! latent L
//! selection S
//! edge A -> B      # DAG edge, or tail/arrow edge of a mixed graph
//! edge A o> B      # <mark at A><mark at B>, marks in {-, >, o}
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::dag::{CausalDag, NodeRole};
use super::mixed::{EndMark, MixedGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeEntry {
    pub label: String,
    pub role: NodeRole,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
    pub mark_from: EndMark,
    pub mark_to: EndMark,
}

/// Format-neutral graph description; converts into either graph type.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GraphDocument {
    pub nodes: Vec<NodeEntry>,
    pub edges: Vec<EdgeEntry>,
}

impl GraphDocument {
    pub fn parse(text: &str) -> Result<Self> {
        let mut doc = GraphDocument::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let role = match tokens[0] {
                "node" => Some(NodeRole::Observed),
                "latent" => Some(NodeRole::Latent),
                "selection" => Some(NodeRole::Selection),
                "edge" => None,
                other => return Err(Error::parse(line_no, format!("unknown directive {other:?}"))),
            };
            if let Some(role) = role {
                if tokens.len() != 2 {
                    return Err(Error::parse(line_no, "expected `<directive> <label>`"));
                }
                if doc.nodes.iter().any(|n| n.label == tokens[1]) {
                    return Err(Error::parse(line_no, format!("duplicate node {:?}", tokens[1])));
                }
                doc.nodes.push(NodeEntry {
                    label: tokens[1].to_string(),
                    role,
                });
                continue;
            }
            if tokens.len() != 4 {
                return Err(Error::parse(line_no, "expected `edge <a> <marks> <b>`"));
            }
            let marks: Vec<char> = tokens[2].chars().collect();
            let parsed = match marks.as_slice() {
                [a, b] if *b != '<' => EndMark::from_symbol(*a).zip(EndMark::from_symbol(*b)),
                _ => None,
            };
            let (mark_from, mark_to) =
                parsed.ok_or_else(|| Error::parse(line_no, format!("bad edge marks {:?}", tokens[2])))?;
            for label in [tokens[1], tokens[3]] {
                if !doc.nodes.iter().any(|n| n.label == label) {
                    return Err(Error::parse(line_no, format!("undeclared node {label:?}")));
                }
            }
            doc.edges.push(EdgeEntry {
                from: tokens[1].to_string(),
                to: tokens[3].to_string(),
                mark_from,
                mark_to,
            });
        }
        Ok(doc)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for n in &self.nodes {
            let directive = match n.role {
                NodeRole::Observed => "node",
                NodeRole::Latent => "latent",
                NodeRole::Selection => "selection",
            };
            writeln!(out, "{directive} {}", n.label).unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "edge {} {}{} {}",
                e.from,
                super::mixed::left_symbol(e.mark_from),
                e.mark_to.symbol(),
                e.to
            )
            .unwrap();
        }
        out
    }

    pub fn from_dag(dag: &CausalDag) -> Self {
        GraphDocument {
            nodes: (0..dag.n())
                .map(|v| NodeEntry {
                    label: dag.label(v).to_string(),
                    role: dag.role(v),
                })
                .collect(),
            edges: dag
                .edges()
                .map(|(p, c)| EdgeEntry {
                    from: dag.label(p).to_string(),
                    to: dag.label(c).to_string(),
                    mark_from: EndMark::Tail,
                    mark_to: EndMark::Arrow,
                })
                .collect(),
        }
    }

    pub fn from_mixed(g: &MixedGraph) -> Self {
        GraphDocument {
            nodes: g
                .labels()
                .iter()
                .map(|l| NodeEntry {
                    label: l.clone(),
                    role: NodeRole::Observed,
                })
                .collect(),
            edges: g
                .edges()
                .map(|(a, b, ma, mb)| EdgeEntry {
                    from: g.label(a).to_string(),
                    to: g.label(b).to_string(),
                    mark_from: ma,
                    mark_to: mb,
                })
                .collect(),
        }
    }

    pub fn is_dag_shaped(&self) -> bool {
        self.edges
            .iter()
            .all(|e| e.mark_from == EndMark::Tail && e.mark_to == EndMark::Arrow)
    }

    pub fn to_dag(&self) -> Result<CausalDag> {
        if let Some(e) = self
            .edges
            .iter()
            .find(|e| !(e.mark_from == EndMark::Tail && e.mark_to == EndMark::Arrow))
        {
            return Err(Error::invalid(format!(
                "edge {} {}{} {} is not a DAG edge",
                e.from,
                e.mark_from.symbol(),
                e.mark_to.symbol(),
                e.to
            )));
        }
        let labels = self.nodes.iter().map(|n| n.label.clone()).collect();
        let roles = self.nodes.iter().map(|n| n.role).collect();
        let edges = self
            .edges
            .iter()
            .map(|e| Ok((self.index(&e.from)?, self.index(&e.to)?)))
            .collect::<Result<Vec<_>>>()?;
        CausalDag::new(labels, roles, &edges)
    }

    pub fn to_mixed(&self) -> Result<MixedGraph> {
        if let Some(n) = self.nodes.iter().find(|n| n.role != NodeRole::Observed) {
            return Err(Error::invalid(format!(
                "mixed graphs have observed nodes only, found {:?} {}",
                n.role, n.label
            )));
        }
        let mut g = MixedGraph::new(self.nodes.iter().map(|n| n.label.clone()).collect())?;
        for e in &self.edges {
            g.add_edge(self.index(&e.from)?, self.index(&e.to)?, e.mark_from, e.mark_to)?;
        }
        Ok(g)
    }

    fn index(&self, label: &str) -> Result<usize> {
        self.nodes
            .iter()
            .position(|n| n.label == label)
            .ok_or_else(|| Error::invalid(format!("unknown node {label:?}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.line(), e.to_string()))
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph G {\n");
        for n in &self.nodes {
            let style = match n.role {
                NodeRole::Observed => "",
                NodeRole::Latent => " [style=dashed]",
                NodeRole::Selection => " [style=filled, fillcolor=gray]",
            };
            writeln!(out, "  \"{}\"{style};", n.label).unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  \"{}\" -> \"{}\" [dir=both, arrowtail={}, arrowhead={}];",
                e.from,
                e.to,
                dot_shape(e.mark_from),
                dot_shape(e.mark_to)
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

fn dot_shape(m: EndMark) -> &'static str {
    match m {
        EndMark::Arrow => "normal",
        EndMark::Tail => "none",
        EndMark::Circle => "odot",
    }
}

pub fn parse_dag(text: &str) -> Result<CausalDag> {
    GraphDocument::parse(text)?.to_dag()
}

pub fn parse_mixed(text: &str) -> Result<MixedGraph> {
    GraphDocument::parse(text)?.to_mixed()
}

pub fn write_dag(dag: &CausalDag) -> String {
    GraphDocument::from_dag(dag).to_text()
}

pub fn write_mixed(g: &MixedGraph) -> String {
    GraphDocument::from_mixed(g).to_text()
}
