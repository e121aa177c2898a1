//! `loci`: generate graphs, run LoCI and FCI, compare them on random
//! campaigns, inspect derivations and export graphs.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::AlgoFlags;
use loci_core::campaign::{ground_truth, mine_rule, random_dag, run_campaign, run_trial, DagShape, Verdict};
use loci_core::fci::{run_fci, RULES};
use loci_core::fixtures;
use loci_core::graph::format::{write_dag, write_mixed, GraphDocument};
use loci_core::loci::{run, run_replay, LociResult};
use loci_core::oracle::FactLog;
use loci_core::{CausalDag, DagOracle, Error, LociConfig};

#[derive(Parser, Debug)]
#[command(name = "loci", version, about = "Causal discovery from conditional independencies")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random causal DAG.
    Gen(GenArgs),
    /// Run LoCI, FCI or both on one graph or fact log.
    Run(RunArgs),
    /// Compare LoCI with FCI on one graph or on a random campaign.
    Compare(CompareArgs),
    /// Print the derivation of a causal statement such as `X=>Y`.
    Trace(TraceArgs),
    /// Export a graph, or the PAG learned from it.
    Export(ExportArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct Input {
    /// Graph file (native text, or JSON with a `.json` extension).
    #[arg(long, conflicts_with_all = ["fixture", "replay"])]
    graph: Option<PathBuf>,
    /// Built-in graph by name.
    #[arg(long, conflicts_with = "replay")]
    fixture: Option<String>,
    /// Independence fact log to replay instead of querying an oracle.
    #[arg(long)]
    replay: Option<PathBuf>,
    /// The replayed log covers every pair of variables.
    #[arg(long, requires = "replay")]
    complete: bool,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, default_value_t = 6)]
    observed: usize,
    #[arg(long, default_value_t = 1)]
    latent: usize,
    #[arg(long, default_value_t = 0)]
    selection: usize,
    #[arg(long, default_value_t = 0.35)]
    edge_prob: f64,
    /// Allow selection nodes to have observed children.
    #[arg(long)]
    selection_anywhere: bool,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Loci,
    Fci,
    Both,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Algo::Both)]
    algo: Algo,
    #[command(flatten)]
    flags: AlgoFlags,
    /// Write the PAG here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the closed statement list.
    #[arg(long)]
    statements: Option<PathBuf>,
    /// Write the independence facts found, as a replayable log.
    #[arg(long)]
    facts: Option<PathBuf>,
    /// Write derivations of every established statement as JSON.
    #[arg(long)]
    trace_bundle: Option<PathBuf>,
    /// Write the FCI rule log.
    #[arg(long)]
    rule_log: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompareArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    flags: AlgoFlags,
    #[arg(long)]
    trials: Option<usize>,
    /// Directory for the report and mismatch artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Save the DAG of every trial where this rule fired into `--out`.
    #[arg(long, requires = "out")]
    mine: Vec<String>,
}

#[derive(Args, Debug)]
struct TraceArgs {
    /// Statement to explain, e.g. `X=>Y` or `X=>S`.
    atom: String,
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    flags: AlgoFlags,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Native,
    Json,
    Dot,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long, value_enum, default_value_t = Format::Native)]
    format: Format,
    /// Export the PAG learned by this algorithm instead of the input graph.
    #[arg(long, value_enum)]
    pag: Option<Algo>,
    #[command(flatten)]
    flags: AlgoFlags,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A mismatch between algorithms or a failed campaign.
#[derive(Debug)]
struct Mismatch(String);

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Mismatch {}

const EXIT_MISMATCH: u8 = 1;
const EXIT_INCONSISTENT: u8 = 4;
const EXIT_NOT_FOUND: u8 = 3;
const EXIT_ERROR: u8 = 5;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Mismatch>().is_some() {
        return EXIT_MISMATCH;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Inconsistent { .. }) => EXIT_INCONSISTENT,
        Some(Error::NotFound(_)) => EXIT_NOT_FOUND,
        _ => EXIT_ERROR,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Export(a) => cmd_export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_document(path: &Path) -> Result<GraphDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let doc = if path.extension().is_some_and(|e| e == "json") {
        GraphDocument::from_json(&text)
    } else {
        GraphDocument::parse(&text)
    };
    doc.with_context(|| format!("in {}", path.display()))
}

enum Source {
    Dag(CausalDag),
    Replay(FactLog),
}

impl Input {
    fn load(&self) -> Result<Source> {
        if let Some(p) = &self.graph {
            let doc = read_document(p)?;
            if !doc.is_dag_shaped() {
                bail!("{} is not a DAG", p.display());
            }
            return Ok(Source::Dag(doc.to_dag()?));
        }
        if let Some(name) = &self.fixture {
            return Ok(Source::Dag(fixtures::fixture(name)?));
        }
        if let Some(p) = &self.replay {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let log = FactLog::parse(&text).with_context(|| format!("in {}", p.display()))?;
            return Ok(Source::Replay(log));
        }
        bail!("give one of --graph, --fixture or --replay")
    }

    fn dag(&self) -> Result<CausalDag> {
        match self.load()? {
            Source::Dag(d) => Ok(d),
            Source::Replay(_) => bail!("this command needs a graph, not a fact log"),
        }
    }

    fn run_loci(&self, config: &LociConfig) -> Result<LociResult> {
        Ok(match self.load()? {
            Source::Dag(dag) => run(&DagOracle::new(&dag), config)?,
            Source::Replay(log) => run_replay(&log.variables, &log.facts, config, self.complete)?,
        })
    }
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let shape = DagShape {
        n_observed: a.observed,
        n_latent: a.latent,
        n_selection: a.selection,
        edge_probability: a.edge_prob,
        selection_sinks: !a.selection_anywhere,
    };
    let dag = random_dag(&shape, a.seed)?;
    emit(a.out.as_deref(), &write_dag(&dag))
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let config = a.flags.loci()?;
    let start = Instant::now();
    let loci = match a.algo {
        Algo::Fci => None,
        _ => Some(a.input.run_loci(&config)?),
    };
    let fci = match a.algo {
        Algo::Loci => None,
        _ => Some(run_fci(&DagOracle::new(&a.input.dag()?))?),
    };
    if let Some(l) = &loci {
        if let Some(p) = &a.statements {
            emit(Some(p), &l.statements.to_log())?;
        }
        if let Some(p) = &a.facts {
            let log = FactLog {
                variables: l.statements.labels().to_vec(),
                facts: l.ci_facts.clone(),
            };
            emit(Some(p), &log.to_text())?;
        }
        if let Some(p) = &a.trace_bundle {
            emit(Some(p), &trace_bundle(l)?)?;
        }
        eprintln!(
            "loci: {} oracle queries, {} facts, {} blocking premises",
            l.oracle_query_count,
            l.ci_facts.len(),
            l.blocking_premises.len()
        );
    }
    if let Some(f) = &fci {
        if let Some(p) = &a.rule_log {
            emit(Some(p), &f.state.log_text())?;
        }
        eprintln!(
            "fci: {} oracle queries, {} rule applications",
            f.oracle_query_count,
            f.log().len()
        );
    }
    eprintln!("time: {:.1?}", start.elapsed());
    match (&loci, &fci) {
        (Some(l), Some(f)) => {
            if let Some(diff) = l.pag.first_difference(&f.pag) {
                println!("# loci\n{}# fci\n{}", write_mixed(&l.pag), write_mixed(&f.pag));
                return Err(Mismatch(format!("loci and fci differ: {diff}")).into());
            }
            emit(a.out.as_deref(), &write_mixed(&l.pag))
        }
        (Some(l), None) => emit(a.out.as_deref(), &write_mixed(&l.pag)),
        (None, Some(f)) => emit(a.out.as_deref(), &write_mixed(&f.pag)),
        (None, None) => unreachable!(),
    }
}

fn trace_bundle(l: &LociResult) -> Result<String> {
    let mut bundle = serde_json::Map::new();
    for atom in l.statements.established() {
        let d = l.derivation_of(atom)?;
        let value: serde_json::Value = serde_json::from_str(&d.to_json())?;
        bundle.insert(l.statements.atom_string(atom), value);
    }
    Ok(serde_json::to_string_pretty(&serde_json::Value::Object(bundle))? + "\n")
}

fn cmd_compare(a: CompareArgs) -> Result<()> {
    if a.input.replay.is_some() {
        bail!("compare needs a graph or a campaign, not a fact log");
    }
    if a.input.graph.is_some() || a.input.fixture.is_some() {
        return compare_one(&a.input.dag()?, &a.flags.loci()?);
    }
    let spec = a.flags.campaign(a.trials)?;
    let report = run_campaign(&spec)?;
    println!("{}", report.summary());
    eprintln!("time: {:.1?}", report.elapsed);
    let uncovered = report.uncovered_rules();
    if !uncovered.is_empty() {
        println!("rules never fired: {}", uncovered.join(", "));
    }
    if let Some(dir) = &a.out {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), report.to_json() + "\n")?;
        for t in report.failures() {
            let trial = dir.join(format!("trial-{}", t.index));
            fs::create_dir_all(&trial)?;
            fs::write(trial.join("dag.graph"), &t.dag)?;
            let mut notes = format!("{:?}\n", t.verdict);
            if let Verdict::Mismatch { loci, fci, .. } = &t.verdict {
                fs::write(trial.join("loci.pag"), loci)?;
                fs::write(trial.join("fci.pag"), fci)?;
            }
            for v in &t.soundness_violations {
                notes.push_str(&format!("{v}\n"));
            }
            notes.push_str("rerun: loci compare --graph dag.graph\n");
            fs::write(trial.join("notes.txt"), notes)?;
        }
        for rule in &a.mine {
            if !RULES.contains(&rule.as_str()) {
                bail!("unknown rule {rule}; rules are {}", RULES.join(", "));
            }
            for t in mine_rule(&report, rule) {
                fs::write(dir.join(format!("mined-{rule}-{}.graph", t.index)), &t.dag)?;
            }
        }
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Mismatch(format!(
            "{} of {} trials failed",
            report.failures().count(),
            report.trials.len()
        ))
        .into())
    }
}

fn compare_one(dag: &CausalDag, config: &LociConfig) -> Result<()> {
    let t = run_trial(dag, config, 5);
    match &t.verdict {
        Verdict::Equal => {
            let pag = run_fci(&DagOracle::new(dag))?.pag;
            print!("{}", write_mixed(&pag));
            let bf = match t.brute_force {
                Some(true) => "equal",
                Some(false) => "differs",
                None => "skipped",
            };
            println!("# loci and fci agree; brute force {bf}");
        }
        Verdict::Mismatch {
            loci,
            fci,
            first_difference,
        } => {
            println!("# loci\n{loci}# fci\n{fci}");
            return Err(Mismatch(format!("loci and fci differ: {first_difference}")).into());
        }
        Verdict::Error { message } => bail!("{message}"),
    }
    if t.brute_force == Some(false) {
        println!("# enumerated class\n{}", write_mixed(&ground_truth(dag)?));
        return Err(Mismatch("PAG differs from the enumerated equivalence class".into()).into());
    }
    if let Some(v) = t.soundness_violations.first() {
        return Err(Mismatch(format!("unsound statement: {v}")).into());
    }
    Ok(())
}

fn cmd_trace(a: TraceArgs) -> Result<()> {
    let r = a.input.run_loci(&a.flags.loci()?)?;
    let atom = r.statements.parse_atom(&a.atom)?;
    let d = r.derivation_of(atom)?;
    if a.json {
        println!("{}", d.to_json());
    } else {
        print!("{}", d.render());
    }
    Ok(())
}

fn cmd_export(a: ExportArgs) -> Result<()> {
    let doc = match a.pag {
        None => match (&a.input.graph, &a.input.fixture) {
            (Some(p), _) => read_document(p)?,
            (None, Some(name)) => GraphDocument::from_dag(&fixtures::fixture(name)?),
            _ => bail!("export needs --graph or --fixture"),
        },
        Some(Algo::Fci) => GraphDocument::from_mixed(&run_fci(&DagOracle::new(&a.input.dag()?))?.pag),
        Some(_) => GraphDocument::from_mixed(&a.input.run_loci(&a.flags.loci()?)?.pag),
    };
    let text = match a.format {
        Format::Native => doc.to_text(),
        Format::Json => doc.to_json() + "\n",
        Format::Dot => doc.to_dot(),
    };
    emit(a.out.as_deref(), &text)
}
