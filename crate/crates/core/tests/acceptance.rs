//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::process::ExitCode;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use loci_core::campaign::{check_statements, random_dag, replay_subset, run_campaign, CampaignReport, CampaignSpec};
use loci_core::fci::{run_fci, RULES};
use loci_core::fixtures::{fixture, names};
use loci_core::loci::{run, run_replay, LociConfig};
use loci_core::oracle::verify_minimal;
use loci_core::statements::{CausalAtom, StatementList, Status, Target, SEL};
use loci_core::{DagOracle, IndependenceOracle, NodeSet};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn equivalence(main: &CampaignReport) -> Outcome {
    let pass = main.trials.len() >= 1000 && main.equal == main.trials.len();
    let mut detail = format!("{}/{} trials equal", main.equal, main.trials.len());
    if let Some(t) = main.failures().next() {
        detail.push_str(&format!("; first failure trial {}: {:?}", t.index, t.verdict));
    }
    outcome(pass, detail)
}

fn brute_force(main: &CampaignReport, small: &CampaignReport) -> Outcome {
    let checked = main.brute_force_checked + small.brute_force_checked;
    let failed = main.brute_force_failures + small.brute_force_failures;
    outcome(
        small.brute_force_checked >= 200 && failed == 0 && small.equal == small.trials.len(),
        format!(
            "{} graphs with at most 5 observed nodes, {failed} differ from the enumerated class",
            checked
        ),
    )
}

fn soundness(reports: &[&CampaignReport]) -> Outcome {
    let trials: usize = reports.iter().map(|r| r.trials.len()).sum();
    let unsound: Vec<String> = reports
        .iter()
        .flat_map(|r| r.trials.iter())
        .filter(|t| !t.soundness_violations.is_empty())
        .map(|t| format!("trial {}: {}", t.index, t.soundness_violations[0]))
        .collect();
    let mut detail = format!("{trials} trials, {} with unsound statements", unsound.len());
    if let Some(first) = unsound.first() {
        detail.push_str(&format!("; {first}"));
    }
    outcome(unsound.is_empty(), detail)
}

fn worked_examples() -> Outcome {
    let mut failures = Vec::new();
    let oracle = DagOracle::new(&fixture("y_structure").unwrap());
    let var = |o: &DagOracle, l: &str| o.variables().iter().position(|v| v == l).unwrap();
    let r = run(&oracle, &LociConfig::default()).unwrap();
    if r.statements
        .query(CausalAtom::new(var(&oracle, "Z"), var(&oracle, "Y")))
        != Status::Established
    {
        failures.push("Z => Y not established on the Y-structure");
    }
    let oracle = DagOracle::new(&fixture("example2").unwrap());
    let r = run(&oracle, &LociConfig::default()).unwrap();
    let (x, y) = (var(&oracle, "X"), var(&oracle, "Y"));
    if !r.statements.has_disjunct(x, NodeSet::singleton(y).with(SEL)) {
        failures.push("X => Y or X => S missing on the diamond");
    }
    // transitive relation [X, Z1, Z2, V1, Y]
    let (x, z1, z2, v1, y) = (0, 1, 2, 3, 4);
    let labels = ["X", "Z1", "Z2", "V1", "Y"].map(String::from).to_vec();
    let mut l = StatementList::new(labels).unwrap();
    let n = Target::Node;
    l.assert_statement(z1, &[n(x), n(z2), Target::Selection]).unwrap();
    l.assert_statement(z2, &[n(z1), n(v1), Target::Selection]).unwrap();
    l.assert_statement(v1, &[n(y), Target::Selection]).unwrap();
    l.assert_statement(x, &[n(z1), Target::Selection]).unwrap();
    l.close().unwrap();
    if !l.has_disjunct(x, NodeSet::singleton(y).with(SEL)) {
        failures.push("back-substitution did not give X => Y or X => S");
    }
    outcome(
        failures.is_empty(),
        if failures.is_empty() {
            "3/3".to_string()
        } else {
            failures.join("; ")
        },
    )
}

fn anytime(spec: &CampaignSpec) -> Outcome {
    let mut checked = 0;
    let mut bad = Vec::new();
    for i in 0..100 {
        let (seed, shape) = spec.trial(i);
        let dag = random_dag(&shape, seed).unwrap();
        let oracle = DagOracle::new(&dag);
        let full = run(&oracle, &spec.loci).unwrap();
        for (k, fraction) in [0.25, 0.5, 0.75].into_iter().enumerate() {
            let facts = replay_subset(&full.ci_facts, fraction, seed.wrapping_add(k as u64));
            match run_replay(oracle.variables(), &facts, &spec.loci, false) {
                Ok(part) => {
                    let v = check_statements(&oracle, &part.statements);
                    if let Some(first) = v.first() {
                        bad.push(format!("trial {i} at {fraction}: {first}"));
                    }
                }
                Err(e) => bad.push(format!("trial {i} at {fraction}: {e}")),
            }
            checked += 1;
        }
    }
    let mut detail = format!("{checked} partial replays, {} unsound", bad.len());
    if let Some(first) = bad.first() {
        detail.push_str(&format!("; {first}"));
    }
    outcome(bad.is_empty(), detail)
}

fn closure_properties() -> Outcome {
    let mut problems = Vec::new();
    let mut sepsets = 0;
    for name in names() {
        let oracle = DagOracle::new(&fixture(name).unwrap());
        let reference = run(&oracle, &LociConfig::default()).unwrap();
        let expected = reference.statements.fact_set();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in 0..20 {
            let mut facts = reference.ci_facts.clone();
            facts.shuffle(&mut rng);
            let config = LociConfig {
                batch_closure: p % 2 == 1,
                ..LociConfig::default()
            };
            let r = run_replay(oracle.variables(), &facts, &config, true).unwrap();
            if r.statements.fact_set() != expected || r.pag != reference.pag {
                problems.push(format!("{name}: permutation {p} reached a different fixpoint"));
            }
        }
        let mut again = reference.statements.clone();
        again.close().unwrap();
        if again.fact_set() != expected {
            problems.push(format!("{name}: closing twice changed the list"));
        }
        for f in &reference.ci_facts {
            sepsets += 1;
            if !verify_minimal(&oracle, f) {
                problems.push(format!("{name}: {} not minimal", f.describe(oracle.variables())));
            }
        }
    }
    let detail = if problems.is_empty() {
        format!(
            "{} fixtures x 20 permutations agree, close idempotent, {sepsets} sepsets minimal",
            names().count()
        )
    } else {
        problems.join("; ")
    };
    outcome(problems.is_empty(), detail)
}

fn coverage(reports: &[&CampaignReport]) -> Outcome {
    let mut counts: std::collections::BTreeMap<&str, usize> = RULES.iter().map(|&r| (r, 0)).collect();
    for r in reports {
        for (rule, c) in &r.rules {
            *counts.get_mut(rule).unwrap() += c;
        }
    }
    for name in names() {
        let f = run_fci(&DagOracle::new(&fixture(name).unwrap())).unwrap();
        for (rule, c) in f.rule_counts() {
            *counts.get_mut(rule).unwrap() += c;
        }
    }
    let missing: Vec<&str> = RULES.iter().copied().filter(|r| counts[r] == 0).collect();
    let report: Vec<String> = RULES.iter().map(|r| format!("{r}={}", counts[r])).collect();
    let mut detail = report.join(" ");
    if !missing.is_empty() {
        detail.push_str(&format!("; never fired: {}", missing.join(", ")));
    }
    outcome(missing.is_empty(), detail)
}

fn main() -> ExitCode {
    let main_spec = CampaignSpec {
        trials: 1000,
        seed: 1,
        ..CampaignSpec::default()
    };
    let small_spec = CampaignSpec {
        trials: 250,
        seed: 2,
        n_observed: (4, 5),
        ..CampaignSpec::default()
    };
    let main = run_campaign(&main_spec).unwrap();
    let small = run_campaign(&small_spec).unwrap();
    let anytime_spec = CampaignSpec {
        seed: 3,
        ..CampaignSpec::default()
    };

    let results = [
        ("1 loci/fci equivalence", equivalence(&main)),
        ("2 brute-force invariance", brute_force(&main, &small)),
        ("3 statement soundness", soundness(&[&main, &small])),
        ("4 worked examples", worked_examples()),
        ("5 anytime soundness", anytime(&anytime_spec)),
        ("6 closure properties", closure_properties()),
        ("7 rule coverage", coverage(&[&main, &small])),
    ];
    let mut ok = true;
    for (name, o) in &results {
        println!(
            "criterion {name}: {} ({})",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        ok &= o.pass;
    }
    println!(
        "campaigns: {:.1?} for {} trials, {:.1?} for {} trials",
        main.elapsed,
        main.trials.len(),
        small.elapsed,
        small.trials.len()
    );
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
