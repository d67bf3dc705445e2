//! Synthetic collections with a planted topic.
//!
//! Documents are bags of pseudo-words. Non-relevant documents draw every
//! token from a Zipf(1.0) background vocabulary; relevant documents draw a
//! `topical_mixing` fraction of their tokens from a separate topical
//! vocabulary (also Zipf) and the rest from the background.

use std::collections::HashSet;
use std::path::Path;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, Poisson, Zipf};
use serde::{Deserialize, Serialize};

use crate::corpus::{stem, Analyzer, Corpus, Document, Topic};
use crate::error::{Error, Result};
use crate::persist::write_atomic;
use crate::qrels::{Qrels, TopicQrels};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub n: usize,
    pub prevalence: f64,
    pub vocab_size: usize,
    pub doc_length_mean: f64,
    pub topical_term_count: usize,
    pub topical_mixing: f64,
    pub rng_seed: u64,
    pub topic_id: String,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n: 10_000,
            prevalence: 0.01,
            vocab_size: 5_000,
            doc_length_mean: 100.0,
            topical_term_count: 50,
            topical_mixing: 0.8,
            rng_seed: 0,
            topic_id: "T1".into(),
        }
    }
}

/// Upper bound on distinct pseudo-words of up to four syllables, with room
/// for the ones rejected by the filters.
const MAX_WORDS: usize = 1_000_000;

impl SyntheticSpec {
    pub fn num_relevant(&self) -> usize {
        (self.prevalence * self.n as f64).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if !(self.prevalence > 0.0 && self.prevalence < 0.5) {
            return bad(format!("prevalence {} outside (0, 0.5)", self.prevalence));
        }
        if self.num_relevant() < 1 {
            return bad(format!("floor(prevalence * n) = 0 for n = {}", self.n));
        }
        if !(self.topical_mixing > 0.0 && self.topical_mixing <= 1.0) {
            return bad(format!("topical_mixing {} outside (0, 1]", self.topical_mixing));
        }
        if self.vocab_size < 1 || self.topical_term_count < 1 {
            return bad("vocab_size and topical_term_count must be positive".into());
        }
        if self.vocab_size + self.topical_term_count > MAX_WORDS {
            return bad(format!("at most {MAX_WORDS} pseudo-words in total"));
        }
        if !(self.doc_length_mean >= 1.0 && self.doc_length_mean.is_finite()) {
            return bad(format!("doc_length_mean {} must be at least 1", self.doc_length_mean));
        }
        if self.topic_id.trim().is_empty() || self.topic_id.contains(char::is_whitespace) {
            return bad(format!("topic id {:?} must be a non-empty token", self.topic_id));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Testbed {
    pub corpus: Corpus,
    pub qrels: Qrels,
    pub topic: Topic,
    /// Topical pseudo-words, most frequent first.
    pub topical_terms: Vec<String>,
    pub background_terms: Vec<String>,
}

const CONSONANTS: &[u8] = b"bdfgklmnprstvz";
const VOWELS: &[u8] = b"aiou";

fn pseudo_word<R: Rng>(rng: &mut R, syllables: usize) -> String {
    let mut w = String::with_capacity(2 * syllables);
    for _ in 0..syllables {
        w.push(CONSONANTS[rng.random_range(0..CONSONANTS.len())] as char);
        w.push(VOWELS[rng.random_range(0..VOWELS.len())] as char);
    }
    w
}

/// `count` distinct words that are not stopwords and are their own stems,
/// so each survives analysis as exactly one feature.
fn pseudo_vocabulary<R: Rng>(rng: &mut R, count: usize, analyzer: &Analyzer) -> Vec<String> {
    let syllables = if count <= 20_000 { 3 } else { 4 };
    let mut seen = HashSet::with_capacity(count);
    let mut words = Vec::with_capacity(count);
    while words.len() < count {
        let w = pseudo_word(rng, syllables);
        if analyzer.is_stopword(&w) || stem(&w) != w || !seen.insert(w.clone()) {
            continue;
        }
        words.push(w);
    }
    words
}

pub fn generate(spec: &SyntheticSpec) -> Result<Testbed> {
    spec.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(spec.rng_seed);
    let analyzer = Analyzer::smart();
    let mut words = pseudo_vocabulary(&mut rng, spec.vocab_size + spec.topical_term_count, &analyzer);
    let background_terms = words.split_off(spec.topical_term_count);
    let topical_terms = words;

    let background = Zipf::new(spec.vocab_size as f64, 1.0).expect("vocab_size >= 1");
    let topical = Zipf::new(spec.topical_term_count as f64, 1.0).expect("topical_term_count >= 1");
    let length = Poisson::new(spec.doc_length_mean).expect("mean >= 1");

    let mut relevant = vec![false; spec.n];
    for i in index::sample(&mut rng, spec.n, spec.num_relevant()) {
        relevant[i] = true;
    }

    let width = spec.n.to_string().len();
    let mut docs = Vec::with_capacity(spec.n);
    let mut gold = TopicQrels::new();
    for (i, &is_rel) in relevant.iter().enumerate() {
        let id = format!("D{:0width$}", i + 1);
        let len = (length.sample(&mut rng) as usize).max(1);
        let mut text = String::with_capacity(len * 8);
        for t in 0..len {
            if t > 0 {
                text.push(' ');
            }
            let word = if is_rel && (spec.topical_mixing >= 1.0 || rng.random_bool(spec.topical_mixing)) {
                &topical_terms[topical.sample(&mut rng) as usize - 1]
            } else {
                &background_terms[background.sample(&mut rng) as usize - 1]
            };
            text.push_str(word);
        }
        gold.set(id.clone(), is_rel);
        docs.push(Document::new(id, text));
    }

    let query_terms = &topical_terms[..topical_terms.len().min(3)];
    let described = &topical_terms[..topical_terms.len().min(5)];
    let topic = Topic {
        id: spec.topic_id.clone(),
        seed_query: query_terms.join(" "),
        description: describe(described),
    };
    let mut qrels = Qrels::new();
    qrels.insert_topic(spec.topic_id.clone(), gold);
    Ok(Testbed {
        corpus: Corpus::from_documents(docs)?,
        qrels,
        topic,
        topical_terms,
        background_terms,
    })
}

/// A training standard that disagrees with `qrels`: every judgment is
/// flipped independently with probability `rate`.
pub fn noisy_qrels(qrels: &Qrels, rate: f64, rng_seed: u64) -> Result<Qrels> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidParameter(format!("noise rate {rate} outside [0, 1]")));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(rng_seed);
    rng.set_stream(1);
    let mut out = Qrels::new();
    for topic in qrels.topic_ids() {
        let mut judged = TopicQrels::new();
        for (doc, rel) in qrels.topic(topic).judged() {
            judged.set(doc, rel ^ rng.random_bool(rate));
        }
        out.insert_topic(topic, judged);
    }
    Ok(out)
}

fn describe(terms: &[String]) -> String {
    match terms {
        [] => String::new(),
        [one] => format!("Documents concerning {one}."),
        [init @ .., last] => format!("Documents concerning {} and {last}.", init.join(", ")),
    }
}

pub fn topics_to_tsv(topics: &[Topic]) -> String {
    let clean = |s: &str| s.replace(['\t', '\n', '\r'], " ");
    topics
        .iter()
        .map(|t| format!("{}\t{}\t{}\n", t.id, clean(&t.seed_query), clean(&t.description)))
        .collect()
}

pub const CORPUS_FILE: &str = "corpus.tsv";
pub const QRELS_FILE: &str = "qrels.txt";
pub const TOPICS_FILE: &str = "topics.tsv";
pub const SPEC_FILE: &str = "spec.json";

impl Testbed {
    /// Writes `corpus.tsv` (lines format), `qrels.txt`, `topics.tsv` and the
    /// generating spec into `dir`.
    pub fn write(&self, dir: impl AsRef<Path>, spec: &SyntheticSpec) -> Result<()> {
        let dir = dir.as_ref();
        write_atomic(dir.join(CORPUS_FILE), self.corpus.to_lines().as_bytes())?;
        write_atomic(dir.join(QRELS_FILE), self.qrels.to_trec().as_bytes())?;
        write_atomic(dir.join(TOPICS_FILE), topics_to_tsv(std::slice::from_ref(&self.topic)).as_bytes())?;
        let mut json = serde_json::to_string_pretty(spec)?;
        json.push('\n');
        write_atomic(dir.join(SPEC_FILE), json.as_bytes())
    }
}
