use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{Method, SeedMode};
use crate::classifier::Label;
use crate::error::{Error, Result};
use crate::qrels::TopicQrels;

pub const LOG_CSV_HEADER: &str = "rank,doc_id,assessor_label,gold_label,iteration,batch_size";

/// One reviewed document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewEntry {
    pub doc_id: String,
    pub assessor_label: Label,
    /// 0 for the seed phase, then one per training round.
    pub iteration: usize,
    /// Nominal batch size when the document was selected.
    pub batch_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunWarning {
    /// `reviewed` documents were reviewed and none was relevant.
    Stalled { reviewed: usize },
}

/// The ordered record of a review.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReviewLog {
    pub topic_id: String,
    pub method: Method,
    pub seed_mode: SeedMode,
    /// The seed document, when drawn from the collection.
    pub seed_doc: Option<String>,
    pub entries: Vec<ReviewEntry>,
    pub warnings: Vec<RunWarning>,
}

impl ReviewLog {
    pub fn new(topic_id: &str, method: Method, seed_mode: SeedMode) -> Self {
        ReviewLog {
            topic_id: topic_id.to_string(),
            method,
            seed_mode,
            seed_doc: None,
            entries: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Review effort so far.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn doc_ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.doc_id.as_str()).collect()
    }

    pub fn is_stalled(&self) -> bool {
        self.warnings.iter().any(|w| matches!(w, RunWarning::Stalled { .. }))
    }

    /// Distinct batch sizes in selection order, one per training round.
    pub fn batch_sizes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = Vec::new();
        let mut last_iter = None;
        for e in &self.entries {
            if e.iteration > 0 && last_iter != Some(e.iteration) {
                out.push(e.batch_size);
                last_iter = Some(e.iteration);
            }
        }
        out
    }

    /// CSV with a leading `# manifest:` comment, the header, then one row per
    /// review. `gold` supplies the `gold_label` column, left empty without it.
    pub fn to_csv(&self, gold: Option<&TopicQrels>, manifest_json: &str) -> String {
        let mut out = String::with_capacity(64 * (self.entries.len() + 2));
        let _ = writeln!(out, "# manifest: {manifest_json}");
        out.push_str(LOG_CSV_HEADER);
        out.push('\n');
        for (rank, e) in self.entries.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                rank + 1,
                e.doc_id,
                u8::from(e.assessor_label.is_relevant()),
                gold.map(|g| u8::from(g.is_relevant(&e.doc_id)).to_string()).unwrap_or_default(),
                e.iteration,
                e.batch_size
            );
        }
        out
    }
}

/// A review log read back from CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedLog {
    /// The JSON after `# manifest:`, if present.
    pub manifest: Option<serde_json::Value>,
    pub entries: Vec<ReviewEntry>,
}

impl ParsedLog {
    pub fn doc_ids(&self) -> Vec<&str> {
        self.entries.iter().map(|e| e.doc_id.as_str()).collect()
    }

    fn manifest_str(&self, path: &[&str]) -> Option<String> {
        let mut v = self.manifest.as_ref()?;
        for key in path {
            v = v.get(key)?;
        }
        match v {
            serde_json::Value::String(s) => Some(s.clone()),
            serde_json::Value::Null => None,
            other => Some(other.to_string()),
        }
    }

    pub fn topic_id(&self) -> Option<String> {
        self.manifest_str(&["topic_id"])
    }

    pub fn method(&self) -> Option<String> {
        self.manifest_str(&["config", "method"])
    }

    pub fn seed_mode(&self) -> Option<String> {
        self.manifest_str(&["config", "seed_mode"])
    }

    pub fn collection_size(&self) -> Option<usize> {
        self.manifest.as_ref()?.get("collection_size")?.as_u64().map(|n| n as usize)
    }
}

/// Parses a log CSV written by [`ReviewLog::to_csv`].
pub fn parse_log_csv(raw: &str) -> Result<ParsedLog> {
    let mut manifest = None;
    let mut entries = Vec::new();
    let mut seen_header = false;
    for (lineno, line) in raw.lines().enumerate() {
        let loc = || format!("log line {}", lineno + 1);
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(json) = rest.trim_start().strip_prefix("manifest:") {
                manifest = Some(serde_json::from_str(json.trim())?);
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if !seen_header {
            if line.trim() != LOG_CSV_HEADER {
                return Err(Error::malformed(loc(), format!("expected header {LOG_CSV_HEADER:?}")));
            }
            seen_header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 6 {
            return Err(Error::malformed(loc(), "expected 6 fields"));
        }
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| Error::malformed(loc(), format!("bad number {s:?}")));
        let rank = num(f[0])?;
        if rank != entries.len() + 1 {
            return Err(Error::malformed(loc(), "ranks must be consecutive from 1"));
        }
        entries.push(ReviewEntry {
            doc_id: f[1].to_string(),
            assessor_label: Label::from_bool(num(f[2])? > 0),
            iteration: num(f[4])?,
            batch_size: num(f[5])?,
        });
    }
    if !seen_header {
        return Err(Error::malformed("log", "missing header row"));
    }
    Ok(ParsedLog { manifest, entries })
}
