mod common;

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::path::Path;

use autotar::corpus::{read_topics, Corpus, CorpusFormat};
use autotar::engine::{self, Method, RunConfig, SeedMode};
use autotar::{Analyzer, Collection, Qrels};
use common::pipeline::{autotar, ok, prepare};

fn read(dir: &Path, file: &str) -> String {
    fs::read_to_string(dir.join(file)).unwrap_or_else(|e| panic!("{file}: {e}"))
}

/// Data rows of a CSV with its `# manifest:` line and header checked.
fn rows(raw: &str, header: &str) -> Vec<Vec<String>> {
    let mut lines = raw.lines();
    let manifest = lines.next().unwrap();
    let json = manifest.strip_prefix("# manifest: ").expect("manifest comment");
    serde_json::from_str::<serde_json::Value>(json).expect("manifest is json");
    assert_eq!(lines.next(), Some(header));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

fn error_record(stderr: &[u8]) -> serde_json::Value {
    let text = String::from_utf8_lossy(stderr);
    let line = text.lines().find(|l| l.starts_with('{')).unwrap_or_else(|| panic!("no json record in {text}"));
    serde_json::from_str(line).unwrap()
}

#[test]
fn gen_ingest_run_eval_end_to_end() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen-testbed", "--n", "2000", "--rng_seed", "3", "--out", "tb"]).unwrap();
    ok(dir, &["ingest", "--corpus", "tb/corpus.tsv", "--workspace", "ws"]).unwrap();
    ok(
        dir,
        &[
            "run", "--workspace", "ws", "--topics", "tb/topics.tsv", "--training_qrels", "tb/qrels.txt", "--gold",
            "tb/qrels.txt", "--seed_mode", "random", "--rng_seed", "4", "--effort_budget", "2000", "--out", "runs",
        ],
    )
    .unwrap();
    ok(dir, &["eval", "--logs", "runs", "--gold", "tb/qrels.txt", "--out", "eval"]).unwrap();

    // the binary wrote what the library computes on the same inputs
    let corpus = Corpus::ingest(dir.join("tb/corpus.tsv"), CorpusFormat::Lines).unwrap();
    let collection = Collection::build(corpus, Analyzer::smart());
    let topic = read_topics(dir.join("tb/topics.tsv")).unwrap().remove(0);
    let qrels = Qrels::read(dir.join("tb/qrels.txt")).unwrap();
    let gold = qrels.topic(&topic.id);
    let cfg = RunConfig {
        effort_budget: 2000,
        rng_seed: 4,
        ..RunConfig::new(Method::AutoTar, SeedMode::RandomRelevant)
    };
    let log = engine::run(&cfg, &collection, &topic, gold).unwrap();
    let written = rows(&read(dir, "runs/T1.autotar.random.log.csv"), engine::LOG_CSV_HEADER);
    let ids: Vec<&str> = written.iter().map(|r| r[1].as_str()).collect();
    assert_eq!(ids, log.doc_ids());
    assert!(written.iter().all(|r| r[2] == r[3]), "training and gold agree here");

    // planted-topic expectations: 75% recall within 5R, full recall at n
    let r = gold.num_relevant();
    assert_eq!(r, 20);
    let effort = rows(&read(dir, "eval/recall_effort.csv"), "log,topic,method,seed_mode,target,effort,terminal_recall");
    let at = |target: &str| effort.iter().find(|row| row[4] == target).unwrap().clone();
    let e75: usize = at("0.75")[5].parse().unwrap();
    assert!(e75 <= 5 * r, "75% recall at {e75}");
    // reached targets leave terminal_recall empty
    let e90: usize = at("0.9")[5].parse().unwrap();
    assert!(e75 <= e90 && e90 <= 2000);
    assert_eq!(at("0.9")[6], "");
    let gain = read(dir, "eval/gain/T1.autotar.random.csv");
    assert!(gain.lines().nth(1) == Some("effort,recall"));
    assert!(gain.trim_end().ends_with(",1"));
}

#[test]
fn repeated_gen_testbed_is_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    for out in ["a", "b"] {
        ok(dir, &["gen-testbed", "--n", "500", "--rng_seed", "9", "--training_noise", "0.1", "--out", out]).unwrap();
    }
    for f in ["corpus.tsv", "qrels.txt", "topics.tsv", "spec.json", "training_qrels.txt"] {
        assert_eq!(read(dir, &format!("a/{f}")), read(dir, &format!("b/{f}")), "{f}");
    }
    assert_ne!(read(dir, "a/qrels.txt"), read(dir, "a/training_qrels.txt"));
}

#[test]
fn missing_input_is_a_validation_error() {
    let tmp = tempfile::tempdir().unwrap();
    let out = autotar(tmp.path(), &["ingest", "--corpus", "nope.tsv", "--workspace", "ws"]);
    assert_eq!(out.status.code(), Some(1));
    let record = error_record(&out.stderr);
    assert_eq!(record["error"], "io");
    assert_eq!(record["exit_code"], 1);

    let out = autotar(tmp.path(), &["eval", "--logs", "missing", "--gold", "q.txt", "--out", "e"]);
    assert_eq!(out.status.code(), Some(1));
    // a missing required flag is a usage error, also 1
    assert_eq!(autotar(tmp.path(), &["run", "--out", "x"]).status.code(), Some(1));
}

#[test]
fn tampered_workspace_is_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    prepare(dir, 300).unwrap();
    let args = [
        "run", "--workspace", "ws", "--topics", "topics.tsv", "--training_qrels", "qrels.txt", "--effort_budget", "20",
        "--out", "runs",
    ];
    ok(dir, &args).unwrap();
    let vectors = dir.join("ws/vectors.txt");
    let mut raw = fs::read_to_string(&vectors).unwrap();
    raw.push('\n');
    fs::write(&vectors, raw).unwrap();
    let out = autotar(dir, &args);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(error_record(&out.stderr)["error"], "checksum_mismatch");
}

#[test]
fn replay_reproduces_and_checks_inputs() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    prepare(dir, 1_000).unwrap();
    ok(
        dir,
        &[
            "run", "--workspace", "ws", "--topics", "topics.tsv", "--training_qrels", "qrels.txt", "--method", "spl",
            "--sal_spl_training_size", "400", "--effort_budget", "450", "--rng_seed", "2", "--out", "runs",
        ],
    )
    .unwrap();
    ok(dir, &["run", "--replay", "runs/run.manifest.json", "--out", "again"]).unwrap();
    for t in ["T1", "T2", "T3"] {
        let name = format!("{t}.spl.bm25.log.csv");
        assert_eq!(read(dir, &format!("runs/{name}")), read(dir, &format!("again/{name}")));
    }
    fs::write(dir.join("qrels.txt"), read(dir, "qrels.txt").replacen(" 1\n", " 0\n", 1)).unwrap();
    let out = autotar(dir, &["run", "--replay", "runs/run.manifest.json", "--out", "third"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_reports_sign_test_per_decile() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    prepare(dir, 1_000).unwrap();
    let base = ["run", "--workspace", "ws", "--topics", "topics.tsv", "--training_qrels", "qrels.txt", "--effort_budget", "1000"];
    ok(dir, &[&base[..], &["--seed_mode", "random", "--out", "auto"]].concat()).unwrap();
    ok(dir, &[&base[..], &["--method", "spl", "--sal_spl_training_size", "300", "--out", "spl"]].concat()).unwrap();
    ok(dir, &["compare", "--baseline", "spl", "--subject", "auto", "--gold", "qrels.txt", "--out", "cmp"]).unwrap();
    let signs = rows(&read(dir, "cmp/sign_test.csv"), "target,wins,losses,ties");
    assert_eq!(signs.len(), 9);
    for row in &signs {
        let counts: usize = row[1..].iter().map(|c| c.parse::<usize>().unwrap()).sum();
        assert_eq!(counts, 3, "{row:?}");
    }
    let diff = rows(&read(dir, "cmp/differential.csv"), "topic,effort,baseline_recall,subject_recall");
    let topics: HashSet<&str> = diff.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(topics.len(), 3);
}

/// Background words of medium frequency that no relevant document uses.
fn off_topic_words(dir: &Path) -> Vec<String> {
    let qrels = Qrels::read(dir.join("tb/qrels.txt")).unwrap();
    let gold = qrels.topic("T1");
    let mut df: BTreeMap<String, usize> = BTreeMap::new();
    let mut in_relevant = HashSet::new();
    for line in read(dir, "tb/corpus.tsv").lines() {
        let (id, text) = line.split_once('\t').unwrap();
        let words: HashSet<&str> = text.split_whitespace().collect();
        for w in words {
            if gold.is_relevant(id) {
                in_relevant.insert(w.to_string());
            } else {
                *df.entry(w.to_string()).or_default() += 1;
            }
        }
    }
    let mut by_df: Vec<(usize, String)> =
        df.into_iter().filter(|(w, _)| !in_relevant.contains(w)).map(|(w, n)| (n, w)).collect();
    by_df.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    by_df.into_iter().skip(20).take(5).map(|(_, w)| w).collect()
}

#[test]
fn stalled_run_warns_and_strict_escalates() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    ok(dir, &["gen-testbed", "--n", "3000", "--rng_seed", "6", "--out", "tb"]).unwrap();
    ok(dir, &["ingest", "--corpus", "tb/corpus.tsv", "--workspace", "ws"]).unwrap();
    let words = off_topic_words(dir);
    fs::write(dir.join("topics.tsv"), format!("T1\tunused\t{}\n", words.join(" "))).unwrap();
    let args = [
        "run", "--workspace", "ws", "--topics", "topics.tsv", "--training_qrels", "tb/qrels.txt", "--seed_mode",
        "synthetic", "--effort_budget", "1100",
    ];
    let out = autotar(dir, &[&args[..], &["--out", "lenient"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let record = error_record(&out.stderr);
    assert_eq!(record["warning"], "stalled_run");
    // the run still goes to its budget
    let log = rows(&read(dir, "lenient/T1.autotar.synthetic.log.csv"), engine::LOG_CSV_HEADER);
    assert_eq!(log.len(), 1100);
    assert!(log.iter().all(|r| r[2] == "0"));

    let out = autotar(dir, &[&args[..], &["--strict", "--out", "strict"]].concat());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn seed_failure_is_a_runtime_error() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    prepare(dir, 300).unwrap();
    fs::write(dir.join("empty_qrels.txt"), "T1 0 D0000 0\n").unwrap();
    let out = autotar(
        dir,
        &["run", "--workspace", "ws", "--topics", "topics.tsv", "--training_qrels", "empty_qrels.txt", "--topic", "T1", "--out", "runs"],
    );
    assert_eq!(out.status.code(), Some(2));
    let record = error_record(&out.stderr);
    assert_eq!(record["topic"], "T1");
    assert_eq!(record["exit_code"], 2);
}

#[test]
fn seed_command_lists_bm25_hits() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    prepare(dir, 500).unwrap();
    let query = read(dir, "tb/topics.tsv").split('\t').nth(1).unwrap().to_string();
    let out = ok(dir, &["seed", "--workspace", "ws", "--query", &query, "--k", "5"]).unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "rank\tdoc_id\tscore");
    assert_eq!(lines.len(), 6);
    let qrels = Qrels::read(dir.join("tb/qrels.txt")).unwrap();
    let top = lines[1].split('\t').nth(1).unwrap();
    assert!(qrels.topic("T1").is_relevant(top));

    let out = autotar(dir, &["seed", "--workspace", "ws", "--query", "the of and"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(error_record(&out.stderr)["message"].as_str().unwrap().contains("vacuous"));
}
