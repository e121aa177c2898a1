//! Plain-text log of conditional (in)dependence facts.
//!
//! ```text
//! var A                       # optional, fixes variable order
//! indep A B | C,D minimal destroyers=E,F
//! indep A C | minimal destroyers=
//! dep A C | B
//! ```

use std::fmt::Write as _;

use super::{join_labels, CiFact};
use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactLog {
    pub variables: Vec<String>,
    pub facts: Vec<CiFact>,
}

impl FactLog {
    pub fn new(variables: Vec<String>, facts: Vec<CiFact>) -> Self {
        FactLog { variables, facts }
    }

    /// Parses a log. Without `var` lines, variables are numbered in order of
    /// first appearance.
    pub fn parse(text: &str) -> Result<Self> {
        Self::parse_inner(text, None)
    }

    /// Parses a log against a fixed variable list, e.g. an oracle's.
    pub fn parse_with_variables(text: &str, variables: &[String]) -> Result<Self> {
        Self::parse_inner(text, Some(variables))
    }

    fn parse_inner(text: &str, fixed: Option<&[String]>) -> Result<Self> {
        let mut log = FactLog {
            variables: fixed.map(<[String]>::to_vec).unwrap_or_default(),
            facts: Vec::new(),
        };
        let mut declared = fixed.is_some();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap().trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("var ") {
                let label = rest.trim();
                if fixed.is_some() {
                    if !log.variables.iter().any(|v| v == label) {
                        return Err(Error::parse(line_no, format!("unknown variable {label:?}")));
                    }
                    continue;
                }
                if log.variables.iter().any(|v| v == label) {
                    return Err(Error::parse(line_no, format!("duplicate variable {label:?}")));
                }
                log.push_variable(label, line_no)?;
                declared = true;
                continue;
            }
            let fact = log.parse_fact(line, line_no, declared)?;
            log.facts.push(fact);
        }
        Ok(log)
    }

    fn push_variable(&mut self, label: &str, line_no: usize) -> Result<usize> {
        if label.is_empty() || label.contains(|c: char| c.is_whitespace() || c == ',') {
            return Err(Error::parse(line_no, format!("bad variable name {label:?}")));
        }
        if self.variables.len() == MAX_NODES {
            return Err(Error::parse(line_no, "too many variables"));
        }
        self.variables.push(label.to_string());
        Ok(self.variables.len() - 1)
    }

    fn lookup(&mut self, label: &str, line_no: usize, declared: bool) -> Result<usize> {
        match self.variables.iter().position(|v| v == label) {
            Some(i) => Ok(i),
            None if declared => Err(Error::parse(line_no, format!("unknown variable {label:?}"))),
            None => self.push_variable(label, line_no),
        }
    }

    fn parse_set(&mut self, list: &str, line_no: usize, declared: bool) -> Result<NodeSet> {
        let mut set = NodeSet::EMPTY;
        for label in list.split(',').filter(|s| !s.is_empty()) {
            set.insert(self.lookup(label, line_no, declared)?);
        }
        Ok(set)
    }

    fn parse_fact(&mut self, line: &str, line_no: usize, declared: bool) -> Result<CiFact> {
        let (head, tail) = line
            .split_once('|')
            .ok_or_else(|| Error::parse(line_no, "expected `<indep|dep> X Y | Z`"))?;
        let head: Vec<&str> = head.split_whitespace().collect();
        let independent = match head.first() {
            Some(&"indep") => true,
            Some(&"dep") => false,
            _ => return Err(Error::parse(line_no, "fact must start with indep or dep")),
        };
        if head.len() != 3 {
            return Err(Error::parse(line_no, "expected two variables before `|`"));
        }
        let x = self.lookup(head[1], line_no, declared)?;
        let y = self.lookup(head[2], line_no, declared)?;
        if x == y {
            return Err(Error::parse(line_no, "a fact needs two distinct variables"));
        }
        let mut z = NodeSet::EMPTY;
        let mut minimal = false;
        let mut destroyers = NodeSet::EMPTY;
        let mut seen_z = false;
        for token in tail.split_whitespace() {
            if token == "minimal" {
                minimal = true;
            } else if let Some(list) = token.strip_prefix("destroyers=") {
                destroyers = self.parse_set(list, line_no, declared)?;
            } else if !seen_z && !minimal {
                z = self.parse_set(token, line_no, declared)?;
                seen_z = true;
            } else {
                return Err(Error::parse(line_no, format!("unexpected token {token:?}")));
            }
        }
        if z.contains(x) || z.contains(y) {
            return Err(Error::parse(line_no, "conditioning set contains x or y"));
        }
        if !independent && (minimal || !destroyers.is_empty()) {
            return Err(Error::parse(line_no, "dependence facts take no annotations"));
        }
        if destroyers.contains(x) || destroyers.contains(y) || !destroyers.is_disjoint(z) {
            return Err(Error::parse(line_no, "destroyers must lie outside x, y and z"));
        }
        Ok(CiFact {
            x,
            y,
            z,
            independent,
            minimal,
            destroyers,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for v in &self.variables {
            writeln!(out, "var {v}").unwrap();
        }
        for f in &self.facts {
            out.push_str(&fact_line(f, &self.variables));
            out.push('\n');
        }
        out
    }
}

/// One fact in log syntax, without a trailing newline.
pub fn fact_line(f: &CiFact, labels: &[String]) -> String {
    let z = join_labels(f.z, labels);
    let (x, y) = (&labels[f.x], &labels[f.y]);
    if !f.independent {
        return format!("dep {x} {y} | {z}").trim_end().to_string();
    }
    let mut line = format!("indep {x} {y} | {z}");
    if !z.is_empty() {
        line.push(' ');
    }
    if f.minimal {
        line.push_str("minimal ");
    }
    write!(line, "destroyers={}", join_labels(f.destroyers, labels)).unwrap();
    line
}
