//! Randomized kernel-versus-oracle comparisons. Each check runs `instances`
//! random instances and returns the first disagreement.
// `!(x <= tol)` so that a NaN counts as a disagreement
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::collections::HashSet;

use autotar::corpus::{Analyzer, Corpus, Document, Vocabulary};
use autotar::metrics::{self, F1};
use autotar::search::{bm25_rank, InvertedIndex};
use autotar::vectors::vectorize_terms;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

const TOL: f64 = 1e-9;

fn instance_docs(rng: &mut ChaCha8Rng) -> (Vec<Vec<String>>, Vec<String>) {
    let n = rng.random_range(2..=200);
    let vocab = rng.random_range(2..=WORDS.len());
    let docs = random_docs(rng, n, vocab, 12);
    let mut ids: Vec<String> = (0..n).map(|i| format!("d{i:03}")).collect();
    ids.shuffle(rng);
    (docs, ids)
}

pub fn check_ltc(instances: u64) -> Result<(), String> {
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (docs, _) = instance_docs(&mut rng);
        let vocab = Vocabulary::from_analyzed(&docs);
        for (i, d) in docs.iter().enumerate() {
            let got = vectorize_terms(d, &vocab);
            let want = brute_ltc(&docs, d);
            if got.len() != want.len() {
                return Err(format!("instance {seed} doc {i}: {} features, oracle {}", got.len(), want.len()));
            }
            for (id, w) in got.iter() {
                let term = vocab.term(id);
                let o = want.get(term).copied().unwrap_or(f64::NAN);
                if !((w - o).abs() <= TOL) {
                    return Err(format!("instance {seed} doc {i} term {term}: {w} vs oracle {o}"));
                }
            }
        }
    }
    Ok(())
}

pub fn check_bm25(instances: u64) -> Result<(), String> {
    let analyzer = Analyzer::with_stopwords(Vec::<String>::new());
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(1_000 + seed);
        let (docs, ids) = instance_docs(&mut rng);
        let corpus = Corpus::from_documents(ids.iter().zip(&docs).map(|(i, d)| Document::new(i.as_str(), d.join(" "))))
            .map_err(|e| e.to_string())?;
        let analyzed: Vec<Vec<String>> = corpus.iter().map(|d| analyzer.analyze(&d.text)).collect();
        let vocab = Vocabulary::from_analyzed(&analyzed);
        let index = InvertedIndex::build(&analyzed, &ids, &vocab);
        let qlen = rng.random_range(1..=4);
        let query: Vec<String> = (0..qlen).map(|_| WORDS[rng.random_range(0..WORDS.len())].to_string()).collect();
        let got = bm25_rank(&query.join(" "), &analyzer, &vocab, &index, docs.len());
        let want = brute_bm25(&docs, &ids, &query);
        if got.hits.len() != want.len() {
            return Err(format!("instance {seed}: {} hits, oracle {}", got.hits.len(), want.len()));
        }
        for (h, (d, s)) in got.hits.iter().zip(&want) {
            if h.doc != *d || !((h.score - s).abs() <= TOL) {
                return Err(format!("instance {seed}: hit ({}, {}) vs oracle ({d}, {s})", h.doc, h.score));
            }
        }
    }
    Ok(())
}

pub fn check_effectiveness_measures(instances: u64) -> Result<(), String> {
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(2_000 + seed);
        let n = rng.random_range(1..=200);
        let mut ids: Vec<String> = (0..n).map(|i| format!("d{i}")).collect();
        ids.shuffle(&mut rng);
        let relevant: HashSet<String> = ids.iter().filter(|_| rng.random_bool(0.3)).cloned().collect();
        if relevant.is_empty() {
            continue;
        }
        let gold = autotar::TopicQrels::from_relevant(relevant.iter().map(String::as_str));
        let len = rng.random_range(0..=n);
        let log = &ids[..len];
        for k in 0..=n + 2 {
            let r = metrics::recall_at(log, &gold, k).map_err(|e| e.to_string())?;
            let o = brute_recall(log, &relevant, k);
            if !((r - o).abs() <= TOL) {
                return Err(format!("instance {seed} recall@{k}: {r} vs {o}"));
            }
            if k >= 1 {
                let p = metrics::relative_precision(log, &gold, k).map_err(|e| e.to_string())?;
                let o = brute_relative_precision(log, &relevant, k);
                if !((p - o).abs() <= TOL) {
                    return Err(format!("instance {seed} relative precision@{k}: {p} vs {o}"));
                }
            }
        }
        let ap = metrics::average_precision(log, &gold).map_err(|e| e.to_string())?;
        let o = brute_ap(log, &relevant);
        if !((ap - o).abs() <= TOL) {
            return Err(format!("instance {seed} AP: {ap} vs {o}"));
        }
        let (tp, fp, fn_) = (rng.random_range(0..50), rng.random_range(0..50), rng.random_range(0..50));
        let f = metrics::f1(tp, fp, fn_);
        match (f, brute_f1(tp, fp, fn_)) {
            (F1::Indeterminate, None) => {}
            (F1::Value(a), Some(b)) if (a - b).abs() <= TOL => {}
            (a, b) => return Err(format!("instance {seed} F1({tp},{fp},{fn_}): {a:?} vs {b:?}")),
        }
    }
    Ok(())
}

pub fn check_kendall(instances: u64) -> Result<(), String> {
    for seed in 0..instances {
        let mut rng = ChaCha8Rng::seed_from_u64(3_000 + seed);
        let n = rng.random_range(2..=200);
        let mut a: Vec<usize> = (0..n).collect();
        a.shuffle(&mut rng);
        let mut b = a.clone();
        // partially shuffled copies exercise the whole range of tau
        let swaps = rng.random_range(0..=n);
        for _ in 0..swaps {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            b.swap(i, j);
        }
        let got = metrics::kendall_tau(&a, &b).map_err(|e| e.to_string())?;
        let want = brute_kendall(&a, &b);
        // both are (C - D) / P from exact integer counts
        if got != want {
            return Err(format!("instance {seed}: tau {got} vs oracle {want}"));
        }
    }
    Ok(())
}
