//! The work behind each subcommand, callable without the argument parser.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::workspace;
use crate::corpus::{read_topics, Topic};
use crate::engine::{parse_log_csv, run_many, ParsedLog, ReviewLog, RunConfig, RunJob};
use crate::error::{Error, Result};
use crate::metrics::{self, RecallEffort, SignOutcome};
use crate::numfmt::sig9;
use crate::persist::{read_string, sha256_hex, write_atomic};
use crate::qrels::Qrels;
use crate::testbed::{self, SyntheticSpec};

const TOOL: &str = env!("CARGO_PKG_NAME");
const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Recall targets reported by `eval` unless overridden.
pub fn default_targets() -> Vec<f64> {
    let mut t: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    t.push(0.75);
    t.sort_by(f64::total_cmp);
    t
}

/// Recall deciles used by the sign test.
pub fn decile_targets() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

fn file_sha(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

fn safe_name(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

fn with_manifest(manifest: &serde_json::Value, header: &str, body: &str) -> String {
    format!("# manifest: {manifest}\n{header}\n{body}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRequest {
    pub workspace: PathBuf,
    pub topics: PathBuf,
    pub training_qrels: PathBuf,
    pub gold_qrels: Option<PathBuf>,
    /// Restrict to these topic ids; empty means every topic.
    pub topic_filter: Vec<String>,
    pub config: RunConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub request: RunRequest,
    /// SHA-256 of each input, keyed by role.
    pub inputs: BTreeMap<String, String>,
}

pub const RUN_MANIFEST_FILE: &str = "run.manifest.json";

#[derive(Debug)]
pub struct RunOutcome {
    pub written: Vec<(PathBuf, ReviewLog)>,
    pub failures: Vec<(String, Error)>,
}

impl RunOutcome {
    pub fn stalled_topics(&self) -> Vec<&str> {
        self.written
            .iter()
            .filter(|(_, l)| l.is_stalled())
            .map(|(_, l)| l.topic_id.as_str())
            .collect()
    }
}

pub fn log_file_name(log: &ReviewLog) -> String {
    format!(
        "{}.{}.{}.log.csv",
        safe_name(&log.topic_id),
        log.method,
        safe_name(&log.seed_mode.to_string())
    )
}

fn input_checksums(req: &RunRequest, ws: &workspace::Workspace) -> Result<BTreeMap<String, String>> {
    let mut inputs = BTreeMap::new();
    inputs.insert("workspace".to_string(), ws.manifest_sha256.clone());
    inputs.insert("topics".to_string(), file_sha(&req.topics)?);
    inputs.insert("training_qrels".to_string(), file_sha(&req.training_qrels)?);
    if let Some(g) = &req.gold_qrels {
        inputs.insert("gold_qrels".to_string(), file_sha(g)?);
    }
    Ok(inputs)
}

/// Runs every selected topic in parallel and writes one log per topic plus
/// `run.manifest.json` into `out`. A failing topic is reported in the outcome
/// and does not affect the others.
pub fn run(req: &RunRequest, out: &Path) -> Result<RunOutcome> {
    req.config.validate()?;
    let ws = workspace::load(&req.workspace)?;
    let inputs = input_checksums(req, &ws)?;
    execute_run(req, &ws, inputs, out)
}

/// Re-runs from a `run.manifest.json`, refusing inputs whose checksums moved.
pub fn replay(manifest_path: &Path, out: &Path) -> Result<RunOutcome> {
    let manifest: RunManifest = serde_json::from_str(&read_string(manifest_path)?)?;
    let req = &manifest.request;
    req.config.validate()?;
    let ws = workspace::load(&req.workspace)?;
    let inputs = input_checksums(req, &ws)?;
    for (role, expected) in &manifest.inputs {
        let found = inputs.get(role).cloned().unwrap_or_default();
        if &found != expected {
            return Err(Error::ChecksumMismatch {
                what: role.clone(),
                expected: expected.clone(),
                found,
            });
        }
    }
    execute_run(req, &ws, inputs, out)
}

fn execute_run(
    req: &RunRequest,
    ws: &workspace::Workspace,
    inputs: BTreeMap<String, String>,
    out: &Path,
) -> Result<RunOutcome> {
    let topics = read_topics(&req.topics)?;
    let selected: Vec<&Topic> = if req.topic_filter.is_empty() {
        topics.iter().collect()
    } else {
        let mut sel = Vec::new();
        for id in &req.topic_filter {
            sel.push(
                topics
                    .iter()
                    .find(|t| &t.id == id)
                    .ok_or_else(|| Error::InvalidParameter(format!("topic {id:?} not in the topics file")))?,
            );
        }
        sel
    };
    let training = Qrels::read(&req.training_qrels)?;
    let gold = req.gold_qrels.as_ref().map(Qrels::read).transpose()?;

    let jobs: Vec<RunJob<'_>> = selected
        .iter()
        .map(|t| RunJob {
            config: req.config.clone(),
            topic: t,
            training: training.topic(&t.id),
        })
        .collect();
    let results = run_many(&ws.collection, &jobs);

    let manifest = RunManifest {
        tool: TOOL.into(),
        version: VERSION.into(),
        request: req.clone(),
        inputs,
    };
    let mut manifest_json = serde_json::to_string_pretty(&manifest)?;
    manifest_json.push('\n');
    write_atomic(out.join(RUN_MANIFEST_FILE), manifest_json.as_bytes())?;

    let mut outcome = RunOutcome {
        written: Vec::new(),
        failures: Vec::new(),
    };
    for (topic, result) in selected.iter().zip(results) {
        match result {
            Ok(log) => {
                let meta = json!({
                    "tool": TOOL,
                    "version": VERSION,
                    "topic_id": topic.id,
                    "config": req.config,
                    "collection_size": ws.collection.len(),
                    "seed_doc": log.seed_doc,
                    "warnings": log.warnings,
                    "inputs": manifest.inputs,
                });
                let csv = log.to_csv(gold.as_ref().map(|g| g.topic(&topic.id)), &meta.to_string());
                let path = out.join(log_file_name(&log));
                write_atomic(&path, csv.as_bytes())?;
                outcome.written.push((path, log));
            }
            Err(e) => outcome.failures.push((topic.id.clone(), e)),
        }
    }
    Ok(outcome)
}

/// A log file read back for evaluation.
#[derive(Debug, Clone)]
pub struct LoadedLog {
    pub path: PathBuf,
    /// File name without the `.log.csv` / `.csv` suffix.
    pub name: String,
    pub topic: String,
    pub method: String,
    pub seed_mode: String,
    pub sha256: String,
    pub parsed: ParsedLog,
}

/// Reads log files; directories contribute every `*.csv` inside, sorted.
pub fn load_logs(paths: &[PathBuf]) -> Result<Vec<LoadedLog>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inside: Vec<PathBuf> = std::fs::read_dir(p)
                .map_err(|e| Error::io(p, e))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.extension().is_some_and(|x| x == "csv"))
                .collect();
            inside.sort();
            files.extend(inside);
        } else {
            files.push(p.clone());
        }
    }
    let mut logs = Vec::with_capacity(files.len());
    for path in files {
        let raw = read_string(&path)?;
        let parsed = parse_log_csv(&raw).map_err(|e| match e {
            Error::Malformed { location, reason } => Error::Malformed {
                location: format!("{}: {location}", path.display()),
                reason,
            },
            other => other,
        })?;
        let file = path.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_default();
        let name = file
            .strip_suffix(".log.csv")
            .or_else(|| file.strip_suffix(".csv"))
            .unwrap_or(&file)
            .to_string();
        let topic = parsed
            .topic_id()
            .unwrap_or_else(|| name.split('.').next().unwrap_or("").to_string());
        logs.push(LoadedLog {
            method: parsed.method().unwrap_or_default(),
            seed_mode: parsed.seed_mode().unwrap_or_default(),
            sha256: sha256_hex(raw.as_bytes()),
            path,
            name,
            topic,
            parsed,
        });
    }
    Ok(logs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalRequest {
    pub logs: Vec<PathBuf>,
    pub gold: PathBuf,
    pub targets: Vec<f64>,
    /// Efforts for the recall-at-effort grid; default is 1, 2, 5 and 10
    /// times the number of relevant documents.
    pub efforts: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EvalSummary {
    pub evaluated: usize,
    /// Logs skipped because the gold standard has no relevant document.
    pub undefined: Vec<String>,
}

fn check_targets(targets: &[f64]) -> Result<()> {
    if targets.is_empty() {
        return Err(Error::InvalidParameter("no recall targets".into()));
    }
    if let Some(t) = targets.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(Error::InvalidParameter(format!("recall target {t} outside (0, 1]")));
    }
    Ok(())
}

/// Writes `gain/<log>.csv`, `recall_effort.csv` and `recall_at_effort.csv`.
pub fn eval(req: &EvalRequest, out: &Path) -> Result<EvalSummary> {
    check_targets(&req.targets)?;
    if let Some(e) = &req.efforts {
        if e.is_empty() {
            return Err(Error::InvalidParameter("empty effort grid".into()));
        }
    }
    let gold = Qrels::read(&req.gold)?;
    let logs = load_logs(&req.logs)?;
    if logs.is_empty() {
        return Err(Error::InvalidParameter("no logs to evaluate".into()));
    }
    let manifest = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": "eval",
        "gold": {"path": req.gold.display().to_string(), "sha256": file_sha(&req.gold)?},
        "logs": logs.iter().map(|l| json!({"name": l.name, "sha256": l.sha256})).collect::<Vec<_>>(),
        "targets": req.targets,
        "efforts": req.efforts,
    });

    let mut summary = EvalSummary::default();
    let mut effort_rows = String::new();
    let mut grid_rows = String::new();
    for log in &logs {
        let topic_gold = gold.topic(&log.topic);
        if topic_gold.num_relevant() == 0 {
            log::warn!("{}: topic {:?} has no relevant documents in the gold standard; skipped", log.name, log.topic);
            summary.undefined.push(log.name.clone());
            continue;
        }
        let ids = log.parsed.doc_ids();
        let curve = metrics::gain_curve(&ids, topic_gold, log.parsed.collection_size())?;
        let mut curve_manifest = manifest.clone();
        curve_manifest["log"] = json!(log.name);
        curve_manifest["total_relevant"] = json!(curve.total_relevant);
        curve_manifest["prevalence"] = json!(curve.prevalence);
        write_atomic(
            out.join("gain").join(format!("{}.csv", log.name)),
            format!("# manifest: {curve_manifest}\n{}", curve.to_csv()).as_bytes(),
        )?;

        let prefix = format!("{},{},{},{}", log.name, log.topic, log.method, log.seed_mode);
        for &t in &req.targets {
            let (effort, terminal) = match metrics::recall_effort(&ids, topic_gold, t)? {
                RecallEffort::Achieved(k) => (k.to_string(), String::new()),
                RecallEffort::NotAchieved { terminal_recall } => (String::new(), sig9(terminal_recall)),
            };
            effort_rows.push_str(&format!("{prefix},{},{effort},{terminal}\n", sig9(t)));
        }
        let r = curve.total_relevant;
        let efforts = req.efforts.clone().unwrap_or_else(|| vec![r, 2 * r, 5 * r, 10 * r]);
        for k in efforts {
            let rp = if k == 0 {
                String::new()
            } else {
                sig9(metrics::relative_precision(&ids, topic_gold, k)?)
            };
            grid_rows.push_str(&format!(
                "{prefix},{k},{},{rp}\n",
                sig9(metrics::recall_at(&ids, topic_gold, k)?)
            ));
        }
        summary.evaluated += 1;
    }
    write_atomic(
        out.join("recall_effort.csv"),
        with_manifest(&manifest, "log,topic,method,seed_mode,target,effort,terminal_recall", &effort_rows).as_bytes(),
    )?;
    write_atomic(
        out.join("recall_at_effort.csv"),
        with_manifest(&manifest, "log,topic,method,seed_mode,effort,recall,relative_precision", &grid_rows).as_bytes(),
    )?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareRequest {
    pub baseline: Vec<PathBuf>,
    pub subject: Vec<PathBuf>,
    pub gold: PathBuf,
    pub targets: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CompareSummary {
    pub topics: Vec<String>,
    /// `(target, wins, losses, ties)` for the subject.
    pub sign_test: Vec<(f64, usize, usize, usize)>,
}

fn by_topic(logs: Vec<LoadedLog>, side: &str) -> Result<BTreeMap<String, LoadedLog>> {
    let mut map = BTreeMap::new();
    for l in logs {
        let topic = l.topic.clone();
        if map.insert(topic.clone(), l).is_some() {
            return Err(Error::InvalidParameter(format!("two {side} logs for topic {topic:?}")));
        }
    }
    Ok(map)
}

/// Writes `differential.csv` (baseline recall against subject recall at a
/// shared effort), `sign_test.csv` and `sign_detail.csv`.
pub fn compare(req: &CompareRequest, out: &Path) -> Result<CompareSummary> {
    check_targets(&req.targets)?;
    let gold = Qrels::read(&req.gold)?;
    let baseline = by_topic(load_logs(&req.baseline)?, "baseline")?;
    let subject = by_topic(load_logs(&req.subject)?, "subject")?;
    let topics: Vec<String> = baseline
        .keys()
        .filter(|t| subject.contains_key(*t) && gold.topic(t).num_relevant() > 0)
        .cloned()
        .collect();
    for t in baseline.keys().chain(subject.keys()) {
        if !topics.contains(t) {
            log::warn!("topic {t:?} is missing from one side or has no relevant documents; skipped");
        }
    }
    if topics.is_empty() {
        return Err(Error::InvalidParameter("no topic evaluable on both sides".into()));
    }
    let manifest = json!({
        "tool": TOOL,
        "version": VERSION,
        "command": "compare",
        "gold": {"path": req.gold.display().to_string(), "sha256": file_sha(&req.gold)?},
        "baseline": topics.iter().map(|t| json!({"name": baseline[t].name, "sha256": baseline[t].sha256})).collect::<Vec<_>>(),
        "subject": topics.iter().map(|t| json!({"name": subject[t].name, "sha256": subject[t].sha256})).collect::<Vec<_>>(),
        "targets": req.targets,
        "effort_sampling": "every integer effort on the grid; recall past the end of a log is held at its terminal value; \
                            linear interpolation between log points is exact at integer efforts",
    });

    let mut diff_rows = String::new();
    let mut detail_rows = String::new();
    let mut counts: Vec<(usize, usize, usize)> = vec![(0, 0, 0); req.targets.len()];
    for t in &topics {
        let g = gold.topic(t);
        let b = baseline[t].parsed.doc_ids();
        let s = subject[t].parsed.doc_ids();
        let n = baseline[t]
            .parsed
            .collection_size()
            .or(subject[t].parsed.collection_size())
            .unwrap_or(b.len().max(s.len()));
        let grid = metrics::default_effort_grid(&b, &s, g, n)?;
        for (k, (rb, rs)) in grid.iter().zip(metrics::differential_points(&b, &s, g, &grid)?) {
            diff_rows.push_str(&format!("{t},{k},{},{}\n", sig9(rb), sig9(rs)));
        }
        for (i, &target) in req.targets.iter().enumerate() {
            let (eb, es, outcome) = metrics::sign_outcome(&b, &s, g, target)?;
            let show = |e: RecallEffort| e.effort().map(|k| k.to_string()).unwrap_or_default();
            let label = match outcome {
                SignOutcome::Win => {
                    counts[i].0 += 1;
                    "win"
                }
                SignOutcome::Loss => {
                    counts[i].1 += 1;
                    "loss"
                }
                SignOutcome::Tie => {
                    counts[i].2 += 1;
                    "tie"
                }
            };
            detail_rows.push_str(&format!("{t},{},{},{},{label}\n", sig9(target), show(eb), show(es)));
        }
    }
    let sign_test: Vec<(f64, usize, usize, usize)> = req
        .targets
        .iter()
        .zip(&counts)
        .map(|(&t, &(w, l, ti))| (t, w, l, ti))
        .collect();
    let sign_rows: String = sign_test
        .iter()
        .map(|(t, w, l, ti)| format!("{},{w},{l},{ti}\n", sig9(*t)))
        .collect();
    write_atomic(
        out.join("differential.csv"),
        with_manifest(&manifest, "topic,effort,baseline_recall,subject_recall", &diff_rows).as_bytes(),
    )?;
    write_atomic(
        out.join("sign_test.csv"),
        with_manifest(&manifest, "target,wins,losses,ties", &sign_rows).as_bytes(),
    )?;
    write_atomic(
        out.join("sign_detail.csv"),
        with_manifest(&manifest, "topic,target,baseline_effort,subject_effort,outcome", &detail_rows).as_bytes(),
    )?;
    Ok(CompareSummary { topics, sign_test })
}

/// Generates a testbed into `out`; with `training_noise > 0` also writes a
/// disagreeing `training_qrels.txt`.
pub fn gen_testbed(spec: &SyntheticSpec, training_noise: f64, out: &Path) -> Result<testbed::Testbed> {
    let tb = testbed::generate(spec)?;
    tb.write(out, spec)?;
    if training_noise > 0.0 {
        let noisy = testbed::noisy_qrels(&tb.qrels, training_noise, spec.rng_seed)?;
        write_atomic(out.join("training_qrels.txt"), noisy.to_trec().as_bytes())?;
    }
    Ok(tb)
}
