//! Relevance judgments in the TREC qrels interchange format
//! (`topic iteration doc_id relevance`).

use std::collections::BTreeMap;
use std::path::Path;

use crate::classifier::Label;
use crate::error::{Error, Result};

/// Judgments for one topic. Unlisted documents are not relevant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TopicQrels {
    labels: BTreeMap<String, bool>,
}

impl TopicQrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_relevant<I, S>(relevant: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        TopicQrels {
            labels: relevant.into_iter().map(|d| (d.into(), true)).collect(),
        }
    }

    pub fn set(&mut self, doc_id: impl Into<String>, relevant: bool) {
        self.labels.insert(doc_id.into(), relevant);
    }

    pub fn is_relevant(&self, doc_id: &str) -> bool {
        self.labels.get(doc_id).copied().unwrap_or(false)
    }

    /// R_inf: the number of relevant documents.
    pub fn num_relevant(&self) -> usize {
        self.labels.values().filter(|&&r| r).count()
    }

    /// Relevant document ids in ascending order.
    pub fn relevant(&self) -> impl Iterator<Item = &str> {
        self.labels.iter().filter(|(_, &r)| r).map(|(d, _)| d.as_str())
    }

    pub fn judged(&self) -> impl Iterator<Item = (&str, bool)> {
        self.labels.iter().map(|(d, &r)| (d.as_str(), r))
    }
}

/// Judgments keyed by topic id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Qrels {
    topics: BTreeMap<String, TopicQrels>,
}

static EMPTY: TopicQrels = TopicQrels {
    labels: BTreeMap::new(),
};

impl Qrels {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Qrels> {
        let path = path.as_ref();
        let raw = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Qrels::parse(&raw)
    }

    pub fn parse(raw: &str) -> Result<Qrels> {
        let mut q = Qrels::new();
        for (lineno, line) in raw.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 4 {
                return Err(Error::malformed(
                    format!("qrels line {}", lineno + 1),
                    "expected `topic iteration doc_id relevance`",
                ));
            }
            let rel: i64 = fields[3].parse().map_err(|_| {
                Error::malformed(format!("qrels line {}", lineno + 1), format!("bad relevance {:?}", fields[3]))
            })?;
            q.set(fields[0], fields[2], rel > 0);
        }
        Ok(q)
    }

    pub fn set(&mut self, topic: &str, doc_id: &str, relevant: bool) {
        self.topics.entry(topic.to_string()).or_default().set(doc_id, relevant);
    }

    pub fn insert_topic(&mut self, topic: impl Into<String>, judgments: TopicQrels) {
        self.topics.insert(topic.into(), judgments);
    }

    /// Judgments for `topic`; an unknown topic has no relevant documents.
    pub fn topic(&self, topic: &str) -> &TopicQrels {
        self.topics.get(topic).unwrap_or(&EMPTY)
    }

    pub fn contains_topic(&self, topic: &str) -> bool {
        self.topics.contains_key(topic)
    }

    pub fn topic_ids(&self) -> impl Iterator<Item = &str> {
        self.topics.keys().map(|k| k.as_str())
    }

    pub fn to_trec(&self) -> String {
        let mut out = String::new();
        for (topic, j) in &self.topics {
            for (doc, rel) in j.judged() {
                out.push_str(&format!("{topic} 0 {doc} {}\n", u8::from(rel)));
            }
        }
        out
    }
}

/// Simulated assessor: the training-standard label, not relevant if absent.
pub fn assess(doc_id: &str, training: &TopicQrels) -> Label {
    Label::from_bool(training.is_relevant(doc_id))
}
