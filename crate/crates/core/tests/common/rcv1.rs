//! Macro-F1 on RCV1-v2 with the published training/test split.
//!
//! `dir` must hold `rcv1.tsv` (doc_id TAB raw text, every document),
//! `train_ids.txt` (one training doc id per line) and
//! `rcv1-v2.topics.qrels` (`topic doc_id 1`). Features are built from the
//! training documents only; each topic gets one classifier, thresholded at 0.

use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use autotar::classifier::{self, Cost, Label, LabeledExample};
use autotar::corpus::{Analyzer, Vocabulary};
use autotar::metrics::{self, f1};
use autotar::vectors::vectorize_terms;
use rayon::prelude::*;

pub fn macro_f1(dir: &Path) -> Result<f64, String> {
    let read = |name: &str| std::fs::read_to_string(dir.join(name)).map_err(|e| format!("{name}: {e}"));
    let corpus = read("rcv1.tsv")?;
    let train_ids: HashSet<String> = read("train_ids.txt")?.lines().map(|l| l.trim().to_string()).collect();
    let mut labels: BTreeMap<String, HashSet<String>> = BTreeMap::new();
    for line in read("rcv1-v2.topics.qrels")?.lines() {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() >= 2 {
            labels.entry(f[0].to_string()).or_default().insert(f[1].to_string());
        }
    }
    let analyzer = Analyzer::smart();
    let docs: Vec<(String, Vec<String>)> = corpus
        .par_lines()
        .filter_map(|l| l.split_once('\t'))
        .map(|(id, text)| (id.to_string(), analyzer.analyze(text)))
        .collect();
    let (train, test): (Vec<_>, Vec<_>) = docs.into_iter().partition(|(id, _)| train_ids.contains(id));
    let train_terms: Vec<Vec<String>> = train.iter().map(|(_, t)| t.clone()).collect();
    let vocab = Vocabulary::from_analyzed(&train_terms);
    let train_vecs: Vec<_> = train_terms.par_iter().map(|t| vectorize_terms(t, &vocab)).collect();
    let test_vecs: Vec<_> = test.par_iter().map(|(_, t)| vectorize_terms(t, &vocab)).collect();

    let per_topic: Vec<_> = labels
        .par_iter()
        .map(|(_, rel)| {
            let ex: Vec<LabeledExample<'_>> = train
                .iter()
                .zip(&train_vecs)
                .map(|((id, _), v)| LabeledExample::reviewed(v, Label::from_bool(rel.contains(id))))
                .collect();
            let (mut tp, mut fp, mut fn_) = (0, 0, 0);
            match classifier::train(&ex, Cost::Auto) {
                Ok(model) => {
                    for ((id, _), v) in test.iter().zip(&test_vecs) {
                        match (model.score(v) > 0.0, rel.contains(id)) {
                            (true, true) => tp += 1,
                            (true, false) => fp += 1,
                            (false, true) => fn_ += 1,
                            _ => {}
                        }
                    }
                }
                // no positive training example: nothing is predicted
                Err(_) => fn_ = test.iter().filter(|(id, _)| rel.contains(id)).count(),
            }
            f1(tp, fp, fn_)
        })
        .collect();
    metrics::macro_f1(&per_topic).mean.ok_or_else(|| "no determinate topic".to_string())
}
