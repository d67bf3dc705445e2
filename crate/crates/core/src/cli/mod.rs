//! Command-line front end: `ingest`, `seed`, `run`, `eval`, `compare`,
//! `gen-testbed`.
//!
//! Exit codes: 0 success, 1 invalid input, 2 runtime failure, 3 stalled run
//! under `--strict`. Failures are also printed to stderr as one JSON record
//! per line.

pub mod commands;
pub mod workspace;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::corpus::CorpusFormat;
use crate::engine::{Method, RunConfig, SeedMode};
use crate::error::Error;
use crate::numfmt::sig9;
use crate::testbed::SyntheticSpec;
use commands::{CompareRequest, EvalRequest, RunRequest};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;
pub const EXIT_STALLED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "autotar", version, about = "Continuous active learning for high-recall review")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a workspace from a corpus file.
    Ingest(IngestArgs),
    /// BM25 ranking of a workspace for a seed query.
    Seed(SeedArgs),
    /// Review topics with one method and write one log per topic.
    Run(RunArgs),
    /// Gain curves, recall-effort table and recall-at-effort grid.
    Eval(EvalArgs),
    /// Differential points and sign-test counts between two sets of logs.
    Compare(CompareArgs),
    /// Write a synthetic corpus, qrels and topic.
    GenTestbed(GenTestbedArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// `lines` (doc_id TAB text) or `trec`.
    #[arg(long, default_value = "lines")]
    pub format: CorpusFormat,
    #[arg(long)]
    pub workspace: PathBuf,
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    #[arg(long)]
    pub workspace: PathBuf,
    #[arg(long)]
    pub query: String,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Re-run from a run.manifest.json; other inputs come from the manifest.
    #[arg(long, conflicts_with_all = ["workspace", "topics", "training_qrels", "gold", "topic"])]
    pub replay: Option<PathBuf>,
    #[arg(long, required_unless_present = "replay")]
    pub workspace: Option<PathBuf>,
    /// topic_id TAB seed_query TAB description, one per line.
    #[arg(long, required_unless_present = "replay")]
    pub topics: Option<PathBuf>,
    /// Qrels that play the assessor during the run.
    #[arg(long = "training_qrels", visible_alias = "training-qrels", required_unless_present = "replay")]
    pub training_qrels: Option<PathBuf>,
    /// Qrels for the gold_label column.
    #[arg(long)]
    pub gold: Option<PathBuf>,
    /// Only these topics (repeatable).
    #[arg(long)]
    pub topic: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
    /// Exit with 3 if any run stalls.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub config: ConfigArgs,
}

/// Flags named after the run configuration fields.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    #[arg(long, default_value = "autotar")]
    pub method: Method,
    /// bm25, random, synthetic or explicit:<doc_id>.
    #[arg(long = "seed_mode", visible_alias = "seed-mode", default_value = "bm25")]
    pub seed_mode: SeedMode,
    /// Maximum documents reviewed (default: unlimited).
    #[arg(long = "effort_budget", visible_alias = "effort-budget")]
    pub effort_budget: Option<usize>,
    #[arg(long = "rng_seed", visible_alias = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,
    #[arg(long = "presumptive_count", visible_alias = "presumptive-count", default_value_t = 100)]
    pub presumptive_count: usize,
    #[arg(long = "initial_batch", visible_alias = "initial-batch", default_value_t = 1)]
    pub initial_batch: usize,
    #[arg(long = "growth_divisor", visible_alias = "growth-divisor", default_value_t = 10)]
    pub growth_divisor: usize,
    #[arg(long = "cal_batch", visible_alias = "cal-batch", default_value_t = 1000)]
    pub cal_batch: usize,
    #[arg(long = "sal_spl_training_size", visible_alias = "sal-spl-training-size", default_value_t = 5000)]
    pub sal_spl_training_size: usize,
}

impl ConfigArgs {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            method: self.method,
            seed_mode: self.seed_mode.clone(),
            effort_budget: self.effort_budget.unwrap_or(usize::MAX),
            rng_seed: self.rng_seed,
            presumptive_count: self.presumptive_count,
            initial_batch: self.initial_batch,
            growth_divisor: self.growth_divisor,
            cal_batch: self.cal_batch,
            sal_spl_training_size: self.sal_spl_training_size,
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Log files or directories of logs.
    #[arg(long, required = true, num_args = 1..)]
    pub logs: Vec<PathBuf>,
    #[arg(long)]
    pub gold: PathBuf,
    /// Recall targets (default 0.1 to 0.9 by 0.1, plus 0.75).
    #[arg(long, value_delimiter = ',')]
    pub targets: Vec<f64>,
    /// Efforts for the recall-at-effort grid (default R, 2R, 5R, 10R).
    #[arg(long, value_delimiter = ',')]
    pub efforts: Vec<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, required = true, num_args = 1..)]
    pub baseline: Vec<PathBuf>,
    #[arg(long, required = true, num_args = 1..)]
    pub subject: Vec<PathBuf>,
    #[arg(long)]
    pub gold: PathBuf,
    /// Recall targets for the sign test (default deciles 0.1 to 0.9).
    #[arg(long, value_delimiter = ',')]
    pub targets: Vec<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenTestbedArgs {
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0.01)]
    pub prevalence: f64,
    #[arg(long = "vocab_size", visible_alias = "vocab-size", default_value_t = 5_000)]
    pub vocab_size: usize,
    #[arg(long = "doc_length_mean", visible_alias = "doc-length-mean", default_value_t = 100.0)]
    pub doc_length_mean: f64,
    #[arg(long = "topical_term_count", visible_alias = "topical-term-count", default_value_t = 50)]
    pub topical_term_count: usize,
    #[arg(long = "topical_mixing", visible_alias = "topical-mixing", default_value_t = 0.8)]
    pub topical_mixing: f64,
    #[arg(long = "rng_seed", visible_alias = "rng-seed", default_value_t = 0)]
    pub rng_seed: u64,
    #[arg(long = "topic_id", visible_alias = "topic-id", default_value = "T1")]
    pub topic_id: String,
    /// Also write training_qrels.txt with each judgment flipped with this probability.
    #[arg(long = "training_noise", visible_alias = "training-noise", default_value_t = 0.0)]
    pub training_noise: f64,
    #[arg(long)]
    pub out: PathBuf,
}

impl GenTestbedArgs {
    pub fn to_spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            n: self.n,
            prevalence: self.prevalence,
            vocab_size: self.vocab_size,
            doc_length_mean: self.doc_length_mean,
            topical_term_count: self.topical_term_count,
            topical_mixing: self.topical_mixing,
            rng_seed: self.rng_seed,
            topic_id: self.topic_id.clone(),
        }
    }
}

/// Exit code for an error: runtime failures of a run are 2, everything that
/// points at bad input is 1.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SeedNotFound { .. } | Error::VacuousSeed { .. } | Error::StalledRun { .. } | Error::SingleClass => {
            EXIT_RUNTIME
        }
        _ => EXIT_VALIDATION,
    }
}

fn report(e: &Error, topic: Option<&str>) -> i32 {
    let code = exit_code(e);
    let record = serde_json::json!({
        "error": e.kind(),
        "message": e.to_string(),
        "topic": topic,
        "exit_code": code,
    });
    eprintln!("{record}");
    code
}

/// Parses `args` and executes the command; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if let Some(n) = cli.threads {
        // Fails only if the pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => report(&e, None),
    }
}

pub fn main() -> i32 {
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    run_from(std::env::args_os())
}

fn execute(command: Command) -> crate::Result<i32> {
    match command {
        Command::Ingest(a) => {
            let m = workspace::ingest(&a.corpus, a.format, &a.workspace)?;
            println!(
                "{}: {} documents, {} features",
                a.workspace.display(),
                m.num_docs,
                m.vocabulary_size
            );
            Ok(EXIT_OK)
        }
        Command::Seed(a) => {
            if a.k == 0 {
                return Err(Error::InvalidParameter("k must be at least 1".into()));
            }
            let ws = workspace::load(&a.workspace)?;
            let ranking = ws.collection.bm25(&a.query, a.k);
            if ranking.vacuous {
                return Err(Error::InvalidParameter(format!(
                    "vacuous query: {:?} has no terms in the vocabulary",
                    a.query
                )));
            }
            println!("rank\tdoc_id\tscore");
            for (i, h) in ranking.hits.iter().enumerate() {
                println!("{}\t{}\t{}", i + 1, ws.collection.doc_id(h.doc), sig9(h.score));
            }
            Ok(EXIT_OK)
        }
        Command::Run(a) => {
            let outcome = match &a.replay {
                Some(manifest) => commands::replay(manifest, &a.out)?,
                None => {
                    let req = RunRequest {
                        workspace: a.workspace.clone().expect("required by clap"),
                        topics: a.topics.clone().expect("required by clap"),
                        training_qrels: a.training_qrels.clone().expect("required by clap"),
                        gold_qrels: a.gold.clone(),
                        topic_filter: a.topic.clone(),
                        config: a.config.to_config(),
                    };
                    commands::run(&req, &a.out)?
                }
            };
            for (path, log) in &outcome.written {
                println!("{}\t{}\t{} reviewed", log.topic_id, path.display(), log.len());
            }
            let mut code = EXIT_OK;
            for (topic, e) in &outcome.failures {
                code = code.max(report(e, Some(topic)));
            }
            let stalled = outcome.stalled_topics();
            for t in &stalled {
                let record = serde_json::json!({
                    "warning": "stalled_run",
                    "topic": t,
                    "message": "1000 or more documents reviewed without a relevant one",
                });
                eprintln!("{record}");
            }
            if a.strict && !stalled.is_empty() {
                code = code.max(EXIT_STALLED);
            }
            Ok(code)
        }
        Command::Eval(a) => {
            let req = EvalRequest {
                logs: a.logs,
                gold: a.gold,
                targets: if a.targets.is_empty() { commands::default_targets() } else { a.targets },
                efforts: (!a.efforts.is_empty()).then_some(a.efforts),
            };
            let s = commands::eval(&req, &a.out)?;
            println!("evaluated {} log(s), skipped {}", s.evaluated, s.undefined.len());
            Ok(EXIT_OK)
        }
        Command::Compare(a) => {
            let req = CompareRequest {
                baseline: a.baseline,
                subject: a.subject,
                gold: a.gold,
                targets: if a.targets.is_empty() { commands::decile_targets() } else { a.targets },
            };
            let s = commands::compare(&req, &a.out)?;
            for (t, w, l, ti) in &s.sign_test {
                println!("recall {t}: {w} wins, {l} losses, {ti} ties over {} topic(s)", s.topics.len());
            }
            Ok(EXIT_OK)
        }
        Command::GenTestbed(a) => {
            let spec = a.to_spec();
            let tb = commands::gen_testbed(&spec, a.training_noise, &a.out)?;
            println!(
                "{}: {} documents, {} relevant",
                a.out.display(),
                tb.corpus.len(),
                tb.qrels.topic(&spec.topic_id).num_relevant()
            );
            Ok(EXIT_OK)
        }
    }
}
