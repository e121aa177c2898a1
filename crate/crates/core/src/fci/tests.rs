use super::*;
use crate::graph::{invariant_marks, project_to_mag, CausalDag, EndMark};
use crate::loci::{self, LociConfig};
use crate::oracle::dag_oracle;

fn y_structure() -> CausalDag {
    CausalDag::builder()
        .observed("W1")
        .observed("W2")
        .observed("X")
        .observed("Y")
        .edge("W1", "X")
        .edge("W2", "X")
        .edge("X", "Y")
        .build()
        .unwrap()
}

fn discriminating() -> CausalDag {
    CausalDag::builder()
        .observed("X")
        .observed("Z1")
        .observed("Z")
        .observed("Y")
        .latent("L1")
        .latent("L2")
        .edge("L1", "X")
        .edge("L1", "Z1")
        .edge("L2", "Z1")
        .edge("L2", "Z")
        .edge("Z1", "Y")
        .edge("Z", "Y")
        .build()
        .unwrap()
}

fn selection_cycle() -> CausalDag {
    CausalDag::builder()
        .observed("A")
        .observed("B")
        .observed("C")
        .observed("D")
        .selection("S")
        .edge("A", "B")
        .edge("B", "C")
        .edge("C", "D")
        .edge("A", "S")
        .edge("D", "S")
        .build()
        .unwrap()
}

fn truth(dag: &CausalDag) -> MixedGraph {
    invariant_marks(&project_to_mag(dag).unwrap()).unwrap()
}

fn edge(g: &MixedGraph, a: &str, b: &str) -> String {
    g.edge_string(g.index_of(a).unwrap(), g.index_of(b).unwrap())
        .unwrap_or_default()
}

#[test]
fn y_structure_matches_loci() {
    let dag = y_structure();
    let out = run_fci(&dag_oracle(&dag)).unwrap();
    assert_eq!(edge(&out.pag, "W1", "X"), "W1 o> X");
    assert_eq!(edge(&out.pag, "X", "Y"), "X -> Y");
    let l = loci::run(&dag_oracle(&dag), &LociConfig::default()).unwrap();
    assert_eq!(out.pag, l.pag);
    assert_eq!(out.pag, truth(&dag));
    assert_eq!(out.rule_counts()["R0b"], 2);
    assert_eq!(out.rule_counts()["R1"], 2);
}

#[test]
fn collider_and_chain() {
    let collider = CausalDag::builder()
        .observed("A")
        .observed("B")
        .observed("C")
        .edge("A", "B")
        .edge("C", "B")
        .build()
        .unwrap();
    let out = run_fci(&dag_oracle(&collider)).unwrap();
    assert_eq!(edge(&out.pag, "A", "B"), "A o> B");
    assert_eq!(edge(&out.pag, "B", "C"), "B <o C");

    let chain = CausalDag::builder()
        .observed("A")
        .observed("B")
        .observed("C")
        .edge("A", "B")
        .edge("B", "C")
        .build()
        .unwrap();
    let out = run_fci(&dag_oracle(&chain)).unwrap();
    assert_eq!(out.pag, truth(&chain));
    assert!(out.log().is_empty());
}

#[test]
fn discriminating_path_rule_uses_sepset() {
    let dag = discriminating();
    let out = run_fci(&dag_oracle(&dag)).unwrap();
    assert_eq!(out.pag, truth(&dag));
    let r4: Vec<String> = out
        .log()
        .iter()
        .filter(|a| a.rule.starts_with("R4"))
        .map(|a| a.to_string())
        .collect();
    assert_eq!(r4, ["R4a: orient Z -> Y (path X,Z1,Z,Y)"]);
    let sep = out.state.sepsets.get(0, 3).unwrap();
    assert!(sep.contains(2));
}

#[test]
fn selection_cycle_becomes_undirected() {
    let dag = selection_cycle();
    let out = run_fci(&dag_oracle(&dag)).unwrap();
    for (a, b) in [("A", "B"), ("B", "C"), ("C", "D"), ("A", "D")] {
        assert_eq!(edge(&out.pag, a, b), format!("{a} -- {b}"));
    }
    assert_eq!(out.pag, truth(&dag));
    assert_eq!(out.rule_counts()["R5"], 8);
}

#[test]
fn shuffled_orders_agree() {
    for dag in [y_structure(), discriminating(), selection_cycle()] {
        let base = run_fci(&dag_oracle(&dag)).unwrap().pag;
        for seed in 1..8 {
            let cfg = FciConfig {
                shuffle_seed: seed,
                ..FciConfig::default()
            };
            assert_eq!(run_fci_with(&dag_oracle(&dag), &cfg).unwrap().pag, base, "seed {seed}");
        }
    }
}

#[test]
fn phases_run_in_order_and_only_fill_circles() {
    let dag = discriminating();
    let out = run_fci(&dag_oracle(&dag)).unwrap();
    let phase = |r: &str| match r {
        "R0b" => 0,
        "R1" | "R2" | "R3" | "R4a" | "R4b" => 1,
        "R5" => 2,
        "R6" | "R7" => 3,
        _ => 4,
    };
    let phases: Vec<u8> = out.log().iter().map(|a| phase(a.rule)).collect();
    assert!(phases.windows(2).all(|w| w[0] <= w[1]), "{}", out.state.log_text());
    let mut seen = std::collections::BTreeSet::new();
    for a in out.log() {
        assert_ne!(a.mark, EndMark::Circle);
        assert!(seen.insert((a.at, a.other)), "mark rewritten: {a}");
    }
}

#[test]
fn conflicting_orientation_is_internal_error() {
    let g = crate::graph::format::parse_mixed("node A\nnode B\nedge A -> B\n").unwrap();
    let mut s = FciState::new(g, SepsetTable::default());
    assert!(!s.orient(1, 0, EndMark::Arrow, "R1", String::new()).unwrap());
    assert!(matches!(
        s.orient(1, 0, EndMark::Tail, "R1", String::new()),
        Err(Error::Internal(_))
    ));
}
