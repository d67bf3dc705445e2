//! Drives the command-line binary through a whole pipeline.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_autotar")
}

pub fn autotar(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

pub fn ok(dir: &Path, args: &[&str]) -> Result<Output, String> {
    let out = autotar(dir, args);
    if out.status.success() {
        Ok(out)
    } else {
        Err(format!(
            "autotar {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ))
    }
}

/// gen-testbed, ingest, then three topics over the same corpus so that
/// `run` has several topics to execute in parallel.
pub fn prepare(dir: &Path, n: usize) -> Result<(), String> {
    let n = n.to_string();
    ok(dir, &["gen-testbed", "--n", &n, "--rng_seed", "5", "--out", "tb"])?;
    ok(dir, &["ingest", "--corpus", "tb/corpus.tsv", "--workspace", "ws"])?;
    let topics = std::fs::read_to_string(dir.join("tb/topics.tsv")).map_err(|e| e.to_string())?;
    let qrels = std::fs::read_to_string(dir.join("tb/qrels.txt")).map_err(|e| e.to_string())?;
    let line = topics.lines().next().ok_or("empty topics file")?;
    let mut all_topics = String::new();
    let mut all_qrels = String::new();
    for id in ["T1", "T2", "T3"] {
        all_topics.push_str(&line.replacen("T1", id, 1));
        all_topics.push('\n');
        for q in qrels.lines() {
            all_qrels.push_str(&q.replacen("T1", id, 1));
            all_qrels.push('\n');
        }
    }
    std::fs::write(dir.join("topics.tsv"), all_topics).map_err(|e| e.to_string())?;
    std::fs::write(dir.join("qrels.txt"), all_qrels).map_err(|e| e.to_string())?;
    Ok(())
}

/// Every file under `root`, relative path and contents, sorted.
pub fn snapshot(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

fn full_pipeline(dir: &Path) -> Result<(), String> {
    prepare(dir, 2_000)?;
    let run = [
        "--threads", "4", "run", "--workspace", "ws", "--topics", "topics.tsv", "--training_qrels", "qrels.txt",
        "--gold", "qrels.txt", "--seed_mode", "random", "--rng_seed", "11", "--effort_budget", "400",
    ];
    ok(dir, &[&run[..], &["--out", "runs"]].concat())?;
    ok(dir, &["run", "--replay", "runs/run.manifest.json", "--out", "replay"])?;
    ok(dir, &["eval", "--logs", "runs", "--gold", "qrels.txt", "--out", "eval"])?;
    Ok(())
}

/// Runs the pipeline in two fresh directories and compares every output.
pub fn deterministic_pipeline() -> Result<(), String> {
    let a = tempfile::tempdir().map_err(|e| e.to_string())?;
    let b = tempfile::tempdir().map_err(|e| e.to_string())?;
    full_pipeline(a.path())?;
    full_pipeline(b.path())?;
    let (sa, sb) = (snapshot(a.path()), snapshot(b.path()));
    if sa.len() != sb.len() {
        return Err(format!("{} files vs {}", sa.len(), sb.len()));
    }
    for ((pa, ca), (pb, cb)) in sa.iter().zip(&sb) {
        if pa != pb || ca != cb {
            return Err(format!("{} differs between executions", pa.display()));
        }
    }
    let logs: Vec<_> = sa.iter().filter(|(p, _)| p.starts_with("runs") && p.extension().is_some_and(|e| e == "csv")).collect();
    if logs.len() != 3 {
        return Err(format!("expected 3 topic logs, found {}", logs.len()));
    }
    for (p, c) in &logs {
        let replayed = sa
            .iter()
            .find(|(q, _)| q == &Path::new("replay").join(p.file_name().unwrap()))
            .ok_or_else(|| format!("no replay of {}", p.display()))?;
        if &replayed.1 != c {
            return Err(format!("replay of {} differs", p.display()));
        }
    }
    Ok(())
}
