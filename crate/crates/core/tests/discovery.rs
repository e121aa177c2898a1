use loci_core::campaign::{check_statements, ground_truth, replay_subset};
use loci_core::fci::{run_fci, run_fci_with, FciConfig};
use loci_core::fixtures::{fixture, names};
use loci_core::graph::format::{parse_mixed, write_mixed};
use loci_core::loci::{run, run_replay, LociConfig};
use loci_core::oracle::{verify_minimal_exhaustive, FactLog};
use loci_core::statements::{CausalAtom, Evidence, Status, SEL};
use loci_core::{DagOracle, IndependenceOracle, NodeSet};

fn var(oracle: &DagOracle, label: &str) -> usize {
    oracle.variables().iter().position(|v| v == label).unwrap()
}

#[test]
fn fixtures_agree_across_algorithms() {
    for name in names() {
        let dag = fixture(name).unwrap();
        let oracle = DagOracle::new(&dag);
        let l = run(&oracle, &LociConfig::default()).unwrap();
        let f = run_fci(&oracle).unwrap();
        assert_eq!(l.pag, f.pag, "{name}: {:?}", l.pag.first_difference(&f.pag));
        if oracle.n() <= 5 {
            assert_eq!(l.pag, ground_truth(&dag).unwrap(), "{name}");
        }
        assert!(check_statements(&oracle, &l.statements).is_empty(), "{name}");
    }
}

#[test]
fn fixtures_trigger_their_rules() {
    let expect = [
        ("y_structure", "R1"),
        ("example2", "R9"),
        ("discriminating", "R4a"),
        ("selection_cycle", "R5"),
        ("selection_cycle", "R6"),
        ("r4b", "R4b"),
        ("r7", "R7"),
        ("r8", "R8"),
        ("r10", "R10"),
    ];
    for (name, rule) in expect {
        let f = run_fci(&DagOracle::new(&fixture(name).unwrap())).unwrap();
        assert!(f.rule_counts()[rule] > 0, "{name} {rule}\n{}", f.state.log_text());
    }
}

#[test]
fn y_structure_statement_and_trace() {
    let oracle = DagOracle::new(&fixture("y_structure").unwrap());
    let r = run(&oracle, &LociConfig::default()).unwrap();
    let zy = CausalAtom::new(var(&oracle, "Z"), var(&oracle, "Y"));
    assert_eq!(r.statements.query(zy), Status::Established);
    let d = r.derivation_of(zy).unwrap();
    assert_eq!(d.leaves().len(), 2, "{}", d.render());
    assert!(d.leaves().iter().any(|e| matches!(e, Evidence::Destroyer { .. })));
}

#[test]
fn example2_keeps_selection_alternative() {
    let oracle = DagOracle::new(&fixture("example2").unwrap());
    let r = run(&oracle, &LociConfig::default()).unwrap();
    let (x, y) = (var(&oracle, "X"), var(&oracle, "Y"));
    assert!(
        r.statements.has_disjunct(x, NodeSet::singleton(y).with(SEL)),
        "{}",
        r.statements.to_log()
    );
    assert_eq!(r.statements.query(CausalAtom::new(x, y)), Status::Unknown);
    assert_eq!(write_mixed(&r.pag), write_mixed(&run_fci(&oracle).unwrap().pag));
}

#[test]
fn recorded_sepsets_are_minimal() {
    for name in names() {
        let oracle = DagOracle::new(&fixture(name).unwrap());
        let r = run(&oracle, &LociConfig::default()).unwrap();
        for f in &r.ci_facts {
            assert!(
                verify_minimal_exhaustive(&oracle, f),
                "{name}: {}",
                f.describe(oracle.variables())
            );
        }
    }
}

#[test]
fn fact_log_replay_reproduces_run() {
    for name in names() {
        let oracle = DagOracle::new(&fixture(name).unwrap());
        let r = run(&oracle, &LociConfig::default()).unwrap();
        let log = FactLog {
            variables: oracle.variables().to_vec(),
            facts: r.ci_facts.clone(),
        };
        let back = FactLog::parse(&log.to_text()).unwrap();
        let replay = run_replay(&back.variables, &back.facts, &LociConfig::default(), true).unwrap();
        assert_eq!(replay.pag, r.pag, "{name}");
        assert_eq!(replay.statements.fact_set(), r.statements.fact_set(), "{name}");
    }
}

#[test]
fn partial_replay_stays_sound() {
    for name in names() {
        let oracle = DagOracle::new(&fixture(name).unwrap());
        let r = run(&oracle, &LociConfig::default()).unwrap();
        for (i, fraction) in [0.25, 0.5, 0.75].into_iter().enumerate() {
            let facts = replay_subset(&r.ci_facts, fraction, i as u64);
            let part = run_replay(oracle.variables(), &facts, &LociConfig::default(), false).unwrap();
            assert!(
                check_statements(&oracle, &part.statements).is_empty(),
                "{name} {fraction}"
            );
        }
    }
}

#[test]
fn pag_text_round_trips() {
    for name in names() {
        let f = run_fci(&DagOracle::new(&fixture(name).unwrap())).unwrap();
        let text = write_mixed(&f.pag);
        assert_eq!(parse_mixed(&text).unwrap(), f.pag);
    }
}

#[test]
fn fci_rule_order_does_not_matter() {
    for name in names() {
        let oracle = DagOracle::new(&fixture(name).unwrap());
        let base = run_fci(&oracle).unwrap().pag;
        for seed in 1..6 {
            let cfg = FciConfig {
                shuffle_seed: seed,
                ..FciConfig::default()
            };
            assert_eq!(run_fci_with(&oracle, &cfg).unwrap().pag, base, "{name} {seed}");
        }
    }
}
