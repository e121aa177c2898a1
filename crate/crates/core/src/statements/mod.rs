//! Causal statements and their closure.
//!
//! A statement is either a negative atom `X ⇏ t` or a disjunction
//! `X ⇒ t1 ∨ X ⇒ t2 ∨ X ⇒ S` over targets of one subject. Targets are observed
//! nodes or the aggregate selection marker `S`, encoded as bit [`SEL`] of a
//! [`NodeSet`]. A single-term disjunction is an established fact.
//!
//! The closure applies, to a fixpoint:
//! - reduce: drop refuted terms; an empty disjunction is an inconsistency
//! - irreflexivity and acyclicity: `X ⇒ X` is false; `X ⇒ Y` gives `Y ⇏ X`
//! - substitution: `A ⇒ B ∨ R` and `B ⇒ T` give `A ⇒ R ∨ T`
//! - contrapositives: `A ⇒ T` and `s ⇏ t` for every `t` in `T` other than `s`
//!   give `s ⇏ A`; `X ⇒ Y` and `X ⇏ C` give `Y ⇏ C`

mod trace;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::nodeset::{NodeSet, MAX_NODES};
use crate::oracle::CiFact;

pub use trace::{Derivation, DerivationNode, Evidence, StepKind};

/// Bit index of the selection marker in a term set.
pub const SEL: usize = MAX_NODES;

/// Right-hand side of a causal relation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Node(usize),
    Selection,
}

impl Target {
    fn bit(self) -> usize {
        match self {
            Target::Node(v) => v,
            Target::Selection => SEL,
        }
    }

    fn from_bit(bit: usize) -> Self {
        if bit == SEL {
            Target::Selection
        } else {
            Target::Node(bit)
        }
    }
}

/// `source ⇒ target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CausalAtom {
    pub source: usize,
    pub target: Target,
}

impl CausalAtom {
    pub fn new(source: usize, target: usize) -> Self {
        CausalAtom {
            source,
            target: Target::Node(target),
        }
    }

    pub fn selection(source: usize) -> Self {
        CausalAtom {
            source,
            target: Target::Selection,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Established,
    Refuted,
    Unknown,
}

/// An open (or established, when it has one term) positive statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Disjunct {
    pub subject: usize,
    pub terms: NodeSet,
}

impl Disjunct {
    pub fn node_targets(&self) -> NodeSet {
        self.terms.without(SEL)
    }

    pub fn selection(&self) -> bool {
        self.terms.contains(SEL)
    }

    pub fn targets(&self) -> impl Iterator<Item = Target> + '_ {
        self.terms.iter().map(Target::from_bit)
    }
}

/// Comparable snapshot of what a list knows.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FactSet {
    pub established: BTreeSet<CausalAtom>,
    pub refuted: BTreeSet<CausalAtom>,
    pub open: BTreeSet<Disjunct>,
}

#[derive(Debug, Clone)]
struct Stmt {
    subject: usize,
    terms: NodeSet,
    trace: usize,
    active: bool,
}

#[derive(Debug, Clone, Copy)]
enum Event {
    Stmt(usize),
    Neg(usize, usize),
}

/// The working set of causal statements, with provenance for each.
#[derive(Debug, Clone)]
pub struct StatementList {
    labels: Vec<String>,
    keep_wide: bool,
    stmts: Vec<Stmt>,
    by_subject: Vec<Vec<usize>>,
    /// Indexed by target bit, with `S` stored at `n`.
    by_term: Vec<Vec<usize>>,
    pos: Vec<NodeSet>,
    neg: Vec<NodeSet>,
    pos_trace: HashMap<(usize, usize), usize>,
    neg_trace: HashMap<(usize, usize), usize>,
    traces: Vec<trace::TraceNode>,
    evidence: Vec<Evidence>,
    evidence_index: HashMap<Evidence, usize>,
    queue: BTreeMap<(usize, u64), Event>,
    seq: u64,
}

impl StatementList {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        Self::with_options(labels, false)
    }

    /// `keep_wide` retains substitution results with more than two node
    /// targets instead of discarding them.
    pub fn with_options(labels: Vec<String>, keep_wide: bool) -> Result<Self> {
        let n = labels.len();
        if n >= MAX_NODES {
            return Err(Error::ResourceLimit {
                what: "variables in a statement list",
                actual: n,
                limit: MAX_NODES - 1,
            });
        }
        Ok(StatementList {
            labels,
            keep_wide,
            stmts: Vec::new(),
            by_subject: vec![Vec::new(); n],
            by_term: vec![Vec::new(); n + 1],
            pos: vec![NodeSet::EMPTY; n],
            neg: vec![NodeSet::EMPTY; n],
            pos_trace: HashMap::new(),
            neg_trace: HashMap::new(),
            traces: Vec::new(),
            evidence: Vec::new(),
            evidence_index: HashMap::new(),
            queue: BTreeMap::new(),
            seq: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::invalid(format!("node {v} out of range")));
        }
        Ok(())
    }

    fn check_fact(&self, fact: &CiFact) -> Result<()> {
        self.check_node(fact.x)?;
        self.check_node(fact.y)?;
        if !fact.z.union(fact.destroyers).is_subset(NodeSet::full(self.n())) {
            return Err(Error::invalid("fact mentions an unknown node"));
        }
        if !fact.independent {
            return Err(Error::contract("statements come from independence facts"));
        }
        Ok(())
    }

    /// `X ⫫ Y | [Z]` gives `z ⇒ X ∨ z ⇒ Y ∨ z ⇒ S` for each `z` in `Z`.
    /// Returns how many statements were kept.
    pub fn assert_from_minimal_independence(&mut self, fact: &CiFact) -> Result<usize> {
        self.check_fact(fact)?;
        if !fact.minimal {
            return Err(Error::contract("fact is not marked minimal"));
        }
        let ev = self.intern(Evidence::Independence(fact.clone()));
        let mut added = 0;
        for z in fact.z.iter() {
            let terms = NodeSet::singleton(fact.x).with(fact.y).with(SEL);
            if self
                .add_positive(z, terms, StepKind::MinimalIndependence, Vec::new(), Some(ev))?
                .is_some()
            {
                added += 1;
            }
        }
        Ok(added)
    }

    /// A destroyer `w` of `X ⫫ Y | [Z]` causes none of `X`, `Y`, `Z` or `S`.
    pub fn assert_from_destroyer(&mut self, fact: &CiFact, w: usize) -> Result<usize> {
        self.check_fact(fact)?;
        if !fact.destroyers.contains(w) {
            return Err(Error::contract(format!(
                "{} is not a recorded destroyer",
                self.label(w)
            )));
        }
        let ev = self.intern(Evidence::Destroyer { fact: fact.clone(), w });
        let targets = fact.z.with(fact.x).with(fact.y).with(SEL);
        let mut added = 0;
        for t in targets.iter() {
            if self.add_neg(w, t, StepKind::DestroyerDependence, Vec::new(), Some(ev))? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// Two variables independent given nothing cause neither one another.
    pub fn assert_from_empty_independence(&mut self, fact: &CiFact) -> Result<usize> {
        self.check_fact(fact)?;
        if !fact.z.is_empty() {
            return Err(Error::contract("conditioning set is not empty"));
        }
        let ev = self.intern(Evidence::Independence(fact.clone()));
        let mut added = 0;
        for (a, b) in [(fact.x, fact.y), (fact.y, fact.x)] {
            if self.add_neg(a, b, StepKind::MinimalIndependence, Vec::new(), Some(ev))? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// An inferred blocking node `z` next to `z_k` on a sequence ending in
    /// `y` gives `z ⇒ z_k ∨ z ⇒ y ∨ z ⇒ S`.
    pub fn assert_inferred_blocking(&mut self, z: usize, z_k: usize, y: usize) -> Result<usize> {
        for v in [z, z_k, y] {
            self.check_node(v)?;
        }
        if z_k == y || z == z_k || z == y {
            return Err(Error::contract("blocking premise needs three distinct nodes"));
        }
        let ev = self.intern(Evidence::Blocking { z, z_k, y });
        let terms = NodeSet::singleton(z_k).with(y).with(SEL);
        Ok(self
            .add_positive(z, terms, StepKind::InferredBlocking, Vec::new(), Some(ev))?
            .map_or(0, |_| 1))
    }

    /// Adds a hand-written positive statement `subject ⇒ t1 ∨ t2 ∨ ...`.
    pub fn assert_statement(&mut self, subject: usize, targets: &[Target]) -> Result<usize> {
        self.check_node(subject)?;
        let mut terms = NodeSet::EMPTY;
        for &t in targets {
            if let Target::Node(v) = t {
                self.check_node(v)?;
            }
            terms.insert(t.bit());
        }
        if terms.is_empty() {
            return Err(Error::invalid("a statement needs at least one target"));
        }
        let ev = self.intern(Evidence::Premise(self.disjunct_string(subject, terms)));
        Ok(self
            .add_positive(subject, terms, StepKind::Premise, Vec::new(), Some(ev))?
            .map_or(0, |_| 1))
    }

    /// Adds a hand-written negative atom.
    pub fn assert_negative(&mut self, atom: CausalAtom) -> Result<usize> {
        self.check_node(atom.source)?;
        if let Target::Node(v) = atom.target {
            self.check_node(v)?;
        }
        let ev = self.intern(Evidence::Premise(format!(
            "{} =/> {}",
            self.label(atom.source),
            self.label(atom.target.bit())
        )));
        let added = self.add_neg(atom.source, atom.target.bit(), StepKind::Premise, Vec::new(), Some(ev))?;
        Ok(usize::from(added))
    }

    /// Runs the rules until nothing changes.
    pub fn close(&mut self) -> Result<()> {
        while let Some((_, event)) = self.queue.pop_first() {
            match event {
                Event::Stmt(id) => self.on_stmt(id)?,
                Event::Neg(s, t) => self.on_neg(s, t)?,
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.queue.is_empty()
    }

    pub fn query(&self, atom: CausalAtom) -> Status {
        if atom.source >= self.n() {
            return Status::Unknown;
        }
        let bit = atom.target.bit();
        if atom.target == Target::Node(atom.source) {
            return Status::Refuted;
        }
        if self.pos[atom.source].contains(bit) {
            Status::Established
        } else if self.neg[atom.source].contains(bit) {
            Status::Refuted
        } else {
            Status::Unknown
        }
    }

    pub fn established(&self) -> Vec<CausalAtom> {
        atoms(&self.pos)
    }

    pub fn refuted(&self) -> Vec<CausalAtom> {
        atoms(&self.neg)
    }

    /// Active statements with two or more terms.
    pub fn open_disjunctions(&self) -> Vec<Disjunct> {
        let mut out: Vec<Disjunct> = self
            .stmts
            .iter()
            .filter(|s| s.active && s.terms.len() > 1)
            .map(|s| Disjunct {
                subject: s.subject,
                terms: s.terms,
            })
            .collect();
        out.sort();
        out
    }

    /// True iff an active statement says exactly `subject ⇒ terms`.
    pub fn has_disjunct(&self, subject: usize, terms: NodeSet) -> bool {
        subject < self.n()
            && self.by_subject[subject]
                .iter()
                .any(|&id| self.stmts[id].active && self.stmts[id].terms == terms)
    }

    pub fn fact_set(&self) -> FactSet {
        FactSet {
            established: self.established().into_iter().collect(),
            refuted: self.refuted().into_iter().collect(),
            open: self.open_disjunctions().into_iter().collect(),
        }
    }

    /// Provenance of an established or refuted atom.
    pub fn derivation(&self, atom: CausalAtom) -> Result<Derivation> {
        let key = (atom.source, atom.target.bit());
        let root = match self.query(atom) {
            Status::Established => self.pos_trace.get(&key),
            Status::Refuted => self.neg_trace.get(&key),
            Status::Unknown => None,
        };
        match root {
            Some(&root) => Ok(trace::extract(self, root)),
            None => Err(Error::NotFound(format!("no derivation for {}", self.atom_string(atom)))),
        }
    }

    /// Every evidence item any stored trace rests on.
    pub fn evidence(&self) -> &[Evidence] {
        &self.evidence
    }

    pub fn label(&self, v: usize) -> &str {
        if v == SEL {
            "S"
        } else {
            &self.labels[v]
        }
    }

    pub fn atom_string(&self, atom: CausalAtom) -> String {
        format!("{} => {}", self.label(atom.source), self.label(atom.target.bit()))
    }

    /// Parses `X => Y` or `X => S`. An observed variable named `S` wins over
    /// the selection target.
    pub fn parse_atom(&self, text: &str) -> Result<CausalAtom> {
        let (lhs, rhs) = text
            .split_once("=>")
            .ok_or_else(|| Error::invalid(format!("expected `X => Y`, got {text:?}")))?;
        let var = |l: &str| {
            self.labels
                .iter()
                .position(|v| v == l)
                .ok_or_else(|| Error::invalid(format!("unknown variable {l:?}")))
        };
        let source = var(lhs.trim())?;
        let rhs = rhs.trim();
        match var(rhs) {
            Ok(t) if t != source => Ok(CausalAtom::new(source, t)),
            Ok(_) => Err(Error::invalid(format!("{text:?} relates a variable to itself"))),
            Err(_) if rhs == "S" => Ok(CausalAtom::selection(source)),
            Err(e) => Err(e),
        }
    }

    /// One line per statement: `fact`, `neg`, then `disj`.
    pub fn to_log(&self) -> String {
        let mut out = String::new();
        for a in self.established() {
            out.push_str(&format!("fact {}\n", self.atom_string(a)));
        }
        for a in self.refuted() {
            out.push_str(&format!("neg {}\n", self.atom_string(a)));
        }
        for d in self.open_disjunctions() {
            out.push_str(&format!("disj {}\n", self.disjunct_string(d.subject, d.terms)));
        }
        out
    }

    pub fn disjunct_string(&self, subject: usize, terms: NodeSet) -> String {
        let nodes = terms.without(SEL);
        if nodes.len() == 1 && !terms.contains(SEL) || nodes.is_empty() && terms.len() == 1 {
            return format!("{} => {}", self.label(subject), self.label(terms.first().unwrap()));
        }
        let list = nodes.iter().map(|v| self.label(v)).collect::<Vec<_>>().join(",");
        let sel = if terms.contains(SEL) { " + S" } else { "" };
        format!("{} => {{{list}}}{sel}", self.label(subject))
    }

    fn intern(&mut self, ev: Evidence) -> usize {
        if let Some(&i) = self.evidence_index.get(&ev) {
            return i;
        }
        self.evidence.push(ev.clone());
        self.evidence_index.insert(ev, self.evidence.len() - 1);
        self.evidence.len() - 1
    }

    fn term_slot(&self, bit: usize) -> usize {
        if bit == SEL {
            self.n()
        } else {
            bit
        }
    }

    fn push_event(&mut self, subject: usize, event: Event) {
        self.seq += 1;
        self.queue.insert((subject, self.seq), event);
    }

    fn new_trace(
        &mut self,
        kind: StepKind,
        inputs: Vec<usize>,
        evidence: Option<usize>,
        output: trace::Output,
    ) -> usize {
        self.traces.push(trace::TraceNode {
            kind,
            inputs,
            evidence,
            output,
        });
        self.traces.len() - 1
    }

    /// Adds `s ⇏ t`. Returns whether it is new.
    fn add_neg(
        &mut self,
        s: usize,
        t: usize,
        kind: StepKind,
        inputs: Vec<usize>,
        evidence: Option<usize>,
    ) -> Result<bool> {
        if t == s || self.neg[s].contains(t) {
            return Ok(false);
        }
        let id = self.new_trace(kind, inputs, evidence, trace::Output::Negative { source: s, target: t });
        if self.pos[s].contains(t) {
            let atom = CausalAtom {
                source: s,
                target: Target::from_bit(t),
            };
            let pos = self.pos_trace[&(s, t)];
            return Err(self.inconsistency(self.atom_string(atom), &[pos, id]));
        }
        self.neg[s].insert(t);
        self.neg_trace.insert((s, t), id);
        self.push_event(s, Event::Neg(s, t));
        Ok(true)
    }

    /// Adds `subject ⇒ terms` after reduction, unless it is redundant or too
    /// wide. Returns the stored statement id.
    fn add_positive(
        &mut self,
        subject: usize,
        terms: NodeSet,
        kind: StepKind,
        inputs: Vec<usize>,
        evidence: Option<usize>,
    ) -> Result<Option<usize>> {
        let irreflexive = terms.contains(subject);
        let raw = terms.without(subject);
        let refuted = raw.intersection(self.neg[subject]);
        let reduced = raw.difference(refuted);
        if !reduced.is_empty() {
            if !reduced.is_disjoint(self.pos[subject]) {
                return Ok(None);
            }
            if !self.keep_wide && reduced.without(SEL).len() > 2 {
                return Ok(None);
            }
            if self.subsumed(subject, reduced) {
                return Ok(None);
            }
        }
        let mut trace = self.new_trace(kind, inputs, evidence, trace::Output::Disjunct { subject, terms });
        if irreflexive {
            trace = self.new_trace(
                StepKind::ReduceIrreflexive,
                vec![trace],
                None,
                trace::Output::Disjunct { subject, terms: raw },
            );
        }
        if !refuted.is_empty() {
            let mut inputs = vec![trace];
            inputs.extend(refuted.iter().map(|t| self.neg_trace[&(subject, t)]));
            trace = self.new_trace(
                StepKind::ReduceEliminate,
                inputs,
                None,
                trace::Output::Disjunct {
                    subject,
                    terms: reduced,
                },
            );
        }
        if reduced.is_empty() {
            let atom = self.disjunct_string(subject, raw);
            return Err(self.inconsistency(atom, &[trace]));
        }
        for &id in &self.by_subject[subject] {
            let st = &mut self.stmts[id];
            if st.active && reduced.is_subset(st.terms) {
                st.active = false;
            }
        }
        let id = self.stmts.len();
        self.stmts.push(Stmt {
            subject,
            terms: reduced,
            trace,
            active: true,
        });
        self.by_subject[subject].push(id);
        for t in reduced.iter() {
            let slot = self.term_slot(t);
            self.by_term[slot].push(id);
        }
        if reduced.len() == 1 {
            let t = reduced.first().unwrap();
            self.pos[subject].insert(t);
            self.pos_trace.insert((subject, t), trace);
        }
        self.push_event(subject, Event::Stmt(id));
        Ok(Some(id))
    }

    fn subsumed(&self, subject: usize, terms: NodeSet) -> bool {
        self.by_subject[subject].iter().any(|&id| {
            let st = &self.stmts[id];
            st.active && st.terms.is_subset(terms)
        })
    }

    fn active_ids(&self, ids: &[usize]) -> Vec<usize> {
        ids.iter().copied().filter(|&id| self.stmts[id].active).collect()
    }

    fn on_stmt(&mut self, id: usize) -> Result<()> {
        if !self.stmts[id].active {
            return Ok(());
        }
        let Stmt {
            subject: a,
            terms,
            trace: tr,
            ..
        } = self.stmts[id].clone();

        // a fact a ⇒ y passes a's negatives on to y
        if terms.len() == 1 {
            let y = terms.first().unwrap();
            if y != SEL {
                for c in self.neg[a].without(y).iter() {
                    let inputs = vec![tr, self.neg_trace[&(a, c)]];
                    self.add_neg(y, c, StepKind::ReduceTransitive, inputs, None)?;
                }
            }
        }

        self.contrapose(id, None)?;

        // as the first premise of a substitution
        for b in terms.without(SEL).iter() {
            for other in self.active_ids(&self.by_subject[b]) {
                self.substitute(id, other, b)?;
                if !self.stmts[id].active {
                    return Ok(());
                }
            }
        }
        // as the second premise
        for other in self.active_ids(&self.by_term[a]) {
            if self.stmts[other].active {
                self.substitute(other, id, a)?;
            }
        }
        Ok(())
    }

    /// `d1 = a ⇒ b ∨ R` and `d2 = b ⇒ T` give `a ⇒ R ∨ T`.
    fn substitute(&mut self, d1: usize, d2: usize, b: usize) -> Result<()> {
        if !self.stmts[d2].active {
            return Ok(());
        }
        let (a, t1, tr1) = (self.stmts[d1].subject, self.stmts[d1].terms, self.stmts[d1].trace);
        let (t2, tr2) = (self.stmts[d2].terms, self.stmts[d2].trace);
        let kind = if t1.len() == 1 && t2.len() == 1 {
            StepKind::ReduceTransitive
        } else {
            StepKind::Substitute
        };
        self.add_positive(a, t1.without(b).union(t2), kind, vec![tr1, tr2], None)?;
        Ok(())
    }

    /// For statement `a ⇒ T`: any `s` refuted on every term of `T` other
    /// than itself cannot cause `a`. With `only`, just that `s` is checked.
    fn contrapose(&mut self, id: usize, only: Option<usize>) -> Result<()> {
        let Stmt {
            subject: a,
            terms,
            trace: tr,
            ..
        } = self.stmts[id].clone();
        let candidates = match only {
            Some(s) => NodeSet::singleton(s),
            None => NodeSet::full(self.n()),
        };
        for s in candidates.without(a).iter() {
            let rest = terms.without(s);
            if !rest.is_subset(self.neg[s]) || self.neg[s].contains(a) {
                continue;
            }
            let kind = if rest.is_empty() {
                StepKind::ReduceAcyclic
            } else {
                StepKind::ReduceTransitive
            };
            let mut inputs = vec![tr];
            inputs.extend(rest.iter().map(|t| self.neg_trace[&(s, t)]));
            self.add_neg(s, a, kind, inputs, None)?;
        }
        Ok(())
    }

    fn on_neg(&mut self, s: usize, t: usize) -> Result<()> {
        let neg_tr = self.neg_trace[&(s, t)];
        // reduce statements of s that mention t
        for id in self.active_ids(&self.by_subject[s]) {
            let st = &self.stmts[id];
            if !st.active || !st.terms.contains(t) {
                continue;
            }
            let (terms, tr) = (st.terms, st.trace);
            self.stmts[id].active = false;
            self.add_positive(s, terms.without(t), StepKind::ReduceEliminate, vec![tr, neg_tr], None)?;
        }
        // contrapositive over statements with term t
        let slot = self.term_slot(t);
        for id in self.active_ids(&self.by_term[slot]) {
            if self.stmts[id].active && self.stmts[id].subject != s {
                self.contrapose(id, Some(s))?;
            }
        }
        // x ⇏ t with x ⇒ y gives y ⇏ t
        for y in self.pos[s].without(SEL).without(t).iter() {
            let inputs = vec![self.pos_trace[&(s, y)], neg_tr];
            self.add_neg(y, t, StepKind::ReduceTransitive, inputs, None)?;
        }
        Ok(())
    }

    fn inconsistency(&self, atom: String, roots: &[usize]) -> Error {
        Error::Inconsistent {
            atom,
            traces: roots.iter().map(|&r| trace::extract(self, r).render()).collect(),
        }
    }
}

fn atoms(table: &[NodeSet]) -> Vec<CausalAtom> {
    let mut out = Vec::new();
    for (s, set) in table.iter().enumerate() {
        out.extend(set.iter().map(|t| CausalAtom {
            source: s,
            target: Target::from_bit(t),
        }));
    }
    out.sort();
    out
}

impl fmt::Display for StatementList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_log())
    }
}

#[cfg(test)]
mod tests;
