use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn list(labels: &[&str]) -> StatementList {
    StatementList::new(labels.iter().map(|s| s.to_string()).collect()).unwrap()
}

fn set(vs: &[usize]) -> NodeSet {
    vs.iter().copied().collect()
}

fn indep(x: usize, y: usize, z: &[usize], destroyers: &[usize]) -> CiFact {
    CiFact {
        destroyers: set(destroyers),
        ..CiFact::independence(x, y, set(z), true)
    }
}

const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const U: usize = 3;
const W: usize = 4;

/// X ⫫ Y | [Z] and Z destroying X ⫫ U | [W].
fn example1() -> (StatementList, Vec<(CiFact, Option<usize>)>) {
    let l = list(&["X", "Y", "Z", "U", "W"]);
    let inputs = vec![(indep(X, Y, &[Z], &[]), None), (indep(X, U, &[W], &[Z]), Some(Z))];
    (l, inputs)
}

fn feed(l: &mut StatementList, inputs: &[(CiFact, Option<usize>)]) {
    for (f, w) in inputs {
        match w {
            Some(w) => l.assert_from_destroyer(f, *w).unwrap(),
            None => l.assert_from_minimal_independence(f).unwrap(),
        };
    }
}

#[test]
fn example1_establishes_z_causes_y() {
    let (mut l, inputs) = example1();
    feed(&mut l, &inputs);
    l.close().unwrap();
    assert_eq!(l.query(CausalAtom::new(Z, Y)), Status::Established);
    assert_eq!(l.query(CausalAtom::new(Y, Z)), Status::Refuted);
    assert_eq!(l.query(CausalAtom::new(Z, X)), Status::Refuted);
    assert_eq!(l.query(CausalAtom::selection(Y)), Status::Refuted);
    assert_eq!(l.query(CausalAtom::new(X, Y)), Status::Unknown);
}

#[test]
fn example1_derivation_rests_on_two_facts() {
    let (mut l, inputs) = example1();
    feed(&mut l, &inputs);
    l.close().unwrap();
    let d = l.derivation(CausalAtom::new(Z, Y)).unwrap();
    assert_eq!(d.leaves().len(), 2);
    assert_eq!(d.root().statement, "Z => Y");
    assert_eq!(d.root().kind, StepKind::ReduceEliminate);
    let text = d.render();
    assert!(text.contains("X _||_ Y | [Z]"), "{text}");
    assert!(text.contains("destroyer Z of X _||_ U | [W]"), "{text}");
    let acyclic = l.derivation(CausalAtom::new(Y, Z)).unwrap();
    assert_eq!(acyclic.root().kind, StepKind::ReduceAcyclic);
    assert!(l.derivation(CausalAtom::new(X, Y)).is_err());
    let json: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
    assert_eq!(json["nodes"].as_array().unwrap().len(), d.nodes.len());
}

#[test]
fn example2_yields_cause_or_selection() {
    let (x, y, z, w) = (0, 1, 2, 3);
    let mut l = list(&["X", "Y", "Z", "W"]);
    l.assert_from_minimal_independence(&indep(z, w, &[x], &[])).unwrap();
    l.assert_from_minimal_independence(&indep(x, y, &[z, w], &[])).unwrap();
    l.close().unwrap();
    assert!(l.has_disjunct(x, set(&[y, SEL])));
    assert!(l.to_log().contains("disj X => {Y} + S\n"));
    assert_eq!(l.query(CausalAtom::new(x, y)), Status::Unknown);
}

#[test]
fn back_substitution_along_transitive_relation() {
    // X, Z1, Z2, V1, Y with statements 1..k+m and X ⇒ Z1 ∨ X ⇒ S
    let (x, z1, z2, v1, y) = (0, 1, 2, 3, 4);
    let mut l = list(&["X", "Z1", "Z2", "V1", "Y"]);
    let n = Target::Node;
    l.assert_statement(z1, &[n(x), n(z2), Target::Selection]).unwrap();
    l.assert_statement(z2, &[n(z1), n(v1), Target::Selection]).unwrap();
    l.assert_statement(v1, &[n(y), Target::Selection]).unwrap();
    l.assert_statement(x, &[n(z1), Target::Selection]).unwrap();
    l.close().unwrap();
    // Z1's statement may come out stronger than Z1 ⇒ X ∨ Z1 ⇒ Y ∨ Z1 ⇒ S
    let implies = |subject: usize, terms: NodeSet| {
        l.open_disjunctions()
            .iter()
            .any(|d| d.subject == subject && d.terms.is_subset(terms))
    };
    assert!(implies(z1, set(&[x, y, SEL])), "{}", l.to_log());
    assert!(l.has_disjunct(x, set(&[y, SEL])), "{}", l.to_log());
}

#[test]
fn transitivity_and_acyclicity() {
    let mut l = list(&["X", "Y", "Z"]);
    l.assert_statement(0, &[Target::Node(1)]).unwrap();
    l.assert_statement(1, &[Target::Node(2)]).unwrap();
    l.close().unwrap();
    assert_eq!(l.query(CausalAtom::new(0, 2)), Status::Established);
    assert_eq!(l.query(CausalAtom::new(2, 0)), Status::Refuted);
    assert_eq!(
        l.derivation(CausalAtom::new(0, 2)).unwrap().root().kind,
        StepKind::ReduceTransitive
    );
}

#[test]
fn contrapositives() {
    // X ⇒ Y and X ⇏ C give Y ⇏ C; X ⇒ Y and C ⇏ Y give C ⇏ X
    let mut l = list(&["X", "Y", "C", "D"]);
    l.assert_statement(0, &[Target::Node(1)]).unwrap();
    l.assert_negative(CausalAtom::new(0, 2)).unwrap();
    l.assert_negative(CausalAtom::selection(0)).unwrap();
    l.assert_negative(CausalAtom::new(3, 1)).unwrap();
    l.close().unwrap();
    assert_eq!(l.query(CausalAtom::new(1, 2)), Status::Refuted);
    assert_eq!(l.query(CausalAtom::selection(1)), Status::Refuted);
    assert_eq!(l.query(CausalAtom::new(3, 0)), Status::Refuted);
}

#[test]
fn empty_list_knows_nothing() {
    let l = list(&["A", "B"]);
    assert_eq!(l.query(CausalAtom::new(0, 1)), Status::Unknown);
    assert_eq!(l.query(CausalAtom::selection(0)), Status::Unknown);
    assert_eq!(l.query(CausalAtom::new(0, 0)), Status::Refuted);
    assert_eq!(l.to_log(), "");
}

#[test]
fn ingestion_shapes() {
    let mut l = list(&["X", "Y", "Z", "W", "U"]);
    assert_eq!(l.assert_from_minimal_independence(&indep(0, 1, &[], &[])).unwrap(), 0);
    assert_eq!(
        l.assert_from_minimal_independence(&indep(0, 1, &[2, 3], &[])).unwrap(),
        2
    );
    let f = indep(0, 1, &[], &[4]);
    assert_eq!(l.assert_from_destroyer(&f, 4).unwrap(), 3);
    // idempotent
    assert_eq!(l.assert_from_destroyer(&f, 4).unwrap(), 0);
    let f = indep(0, 1, &[2], &[4]);
    assert_eq!(l.assert_from_destroyer(&f, 4).unwrap(), 1);
    assert_eq!(l.assert_inferred_blocking(2, 3, 1).unwrap(), 1);
    assert_eq!(l.assert_inferred_blocking(2, 3, 1).unwrap(), 0);
}

#[test]
fn contract_violations() {
    let mut l = list(&["X", "Y", "Z", "W"]);
    let not_minimal = CiFact::independence(0, 1, set(&[2]), false);
    assert!(matches!(
        l.assert_from_minimal_independence(&not_minimal),
        Err(Error::ContractViolation(_))
    ));
    let f = indep(0, 1, &[2], &[]);
    assert!(matches!(
        l.assert_from_destroyer(&f, 3),
        Err(Error::ContractViolation(_))
    ));
    assert!(matches!(
        l.assert_inferred_blocking(2, 1, 1),
        Err(Error::ContractViolation(_))
    ));
}

#[test]
fn conflicting_inputs_report_both_traces() {
    let mut l = list(&["X", "Y"]);
    l.assert_statement(0, &[Target::Node(1)]).unwrap();
    let err = l.assert_negative(CausalAtom::new(0, 1)).unwrap_err();
    match err {
        Error::Inconsistent { atom, traces } => {
            assert_eq!(atom, "X => Y");
            assert_eq!(traces.len(), 2);
        }
        other => panic!("unexpected {other:?}"),
    }

    let mut l = list(&["X", "Y"]);
    l.assert_negative(CausalAtom::new(0, 1)).unwrap();
    l.assert_negative(CausalAtom::selection(0)).unwrap();
    l.close().unwrap();
    let err = l
        .assert_statement(0, &[Target::Node(1), Target::Selection])
        .unwrap_err();
    assert!(matches!(err, Error::Inconsistent { .. }));
}

#[test]
fn wide_substitutions_are_dropped_unless_kept() {
    let labels: Vec<String> = ["A", "B", "C", "D", "E"].iter().map(|s| s.to_string()).collect();
    let build = |keep| {
        let mut l = StatementList::with_options(labels.clone(), keep).unwrap();
        let n = Target::Node;
        l.assert_statement(0, &[n(1), n(2)]).unwrap();
        l.assert_statement(1, &[n(3), n(4)]).unwrap();
        l.close().unwrap();
        l
    };
    assert!(!build(false).has_disjunct(0, set(&[2, 3, 4])));
    assert!(build(true).has_disjunct(0, set(&[2, 3, 4])));
}

#[test]
fn subsumed_statements_are_retired() {
    let mut l = list(&["X", "Y", "Z"]);
    let n = Target::Node;
    l.assert_statement(0, &[n(1), n(2), Target::Selection]).unwrap();
    l.assert_statement(0, &[n(1), Target::Selection]).unwrap();
    // a superset of an active statement is not stored
    assert_eq!(l.assert_statement(0, &[n(1), n(2), Target::Selection]).unwrap(), 0);
    l.close().unwrap();
    assert_eq!(l.open_disjunctions().len(), 1);
}

#[test]
fn closure_is_confluent_and_idempotent() {
    let (base, inputs) = example1();
    let mut reference = base.clone();
    feed(&mut reference, &inputs);
    reference.close().unwrap();
    let expected = reference.fact_set();
    reference.close().unwrap();
    assert_eq!(reference.fact_set(), expected);

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut shuffled = inputs.clone();
        shuffled.shuffle(&mut rng);
        let mut l = base.clone();
        feed(&mut l, &shuffled);
        l.close().unwrap();
        assert_eq!(l.fact_set(), expected);
    }
}

#[test]
fn log_lines() {
    let (mut l, inputs) = example1();
    feed(&mut l, &inputs);
    l.close().unwrap();
    let log = l.to_log();
    assert!(log.contains("fact Z => Y\n"));
    assert!(log.contains("neg Z => S\n"));
    assert!(log.contains("neg Y => Z\n"));
    assert!(!log.contains("disj Z"));
}

#[test]
fn atoms_parse_from_text() {
    let l = list(&["X", "Y"]);
    assert_eq!(l.parse_atom("X=>Y").unwrap(), CausalAtom::new(0, 1));
    assert_eq!(l.parse_atom(" Y => S ").unwrap(), CausalAtom::selection(1));
    assert!(l.parse_atom("X => X").is_err());
    assert!(l.parse_atom("X -> Y").is_err());
    assert!(l.parse_atom("X => Q").is_err());
    let with_s = list(&["X", "S"]);
    assert_eq!(with_s.parse_atom("X => S").unwrap(), CausalAtom::new(0, 1));
}
