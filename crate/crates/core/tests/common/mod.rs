//! Brute-force reference implementations written straight from the
//! definitions, plus random instance builders. Shared by several test targets.
#![allow(dead_code)]

pub mod kernels;
pub mod pipeline;
pub mod rcv1;

use std::collections::{BTreeMap, BTreeSet, HashSet};

use rand::Rng;

/// Words that survive analysis unchanged (no stopwords, Porter-stable).
pub const WORDS: &[&str] = &[
    "bako", "dilu", "fami", "gato", "kiru", "lomi", "mabu", "nori", "pazu", "rima", "sabi", "tofu", "vilo", "zuma",
    "bopi", "dano", "firu", "gopa", "kola", "lupi",
];

pub fn random_docs<R: Rng>(rng: &mut R, num_docs: usize, vocab: usize, max_len: usize) -> Vec<Vec<String>> {
    (0..num_docs)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            (0..len).map(|_| WORDS[rng.random_range(0..vocab)].to_string()).collect()
        })
        .collect()
}

/// ltc weights of document `doc` keyed by term, from scratch: vocabulary is
/// every term with collection frequency >= 2, idf = ln(N / df), terms in
/// every document are dropped, then L2 normalization.
pub fn brute_ltc(docs: &[Vec<String>], terms: &[String]) -> BTreeMap<String, f64> {
    let n = docs.len() as f64;
    let mut raw = BTreeMap::new();
    let distinct: BTreeSet<&String> = terms.iter().collect();
    for t in distinct {
        let cf: usize = docs.iter().map(|d| d.iter().filter(|w| *w == t).count()).sum();
        if cf < 2 {
            continue;
        }
        let df = docs.iter().filter(|d| d.contains(t)).count() as f64;
        if df == n || df == 0.0 {
            continue;
        }
        let tf = terms.iter().filter(|w| *w == t).count() as f64;
        raw.insert(t.clone(), (1.0 + tf.ln()) * (n / df).ln());
    }
    let norm = raw.values().map(|w| w * w).sum::<f64>().sqrt();
    raw.into_iter().map(|(t, w)| (t, w / norm)).collect()
}

/// BM25 scores (k1 = 1.2, b = 0.75) of every document for a bag of query
/// terms, keeping only vocabulary terms (cf >= 2), deduplicated. Documents
/// with a zero score are left out. Sorted by score desc, then id asc.
pub fn brute_bm25(docs: &[Vec<String>], ids: &[String], query: &[String]) -> Vec<(usize, f64)> {
    let n = docs.len() as f64;
    let avgdl = docs.iter().map(|d| d.len()).sum::<usize>() as f64 / n;
    let q: BTreeSet<&String> = query
        .iter()
        .filter(|t| docs.iter().map(|d| d.iter().filter(|w| w == t).count()).sum::<usize>() >= 2)
        .collect();
    let mut out = Vec::new();
    for (i, d) in docs.iter().enumerate() {
        let mut score = 0.0;
        let mut matched = false;
        for t in &q {
            let tf = d.iter().filter(|w| w == t).count() as f64;
            if tf == 0.0 {
                continue;
            }
            matched = true;
            let df = docs.iter().filter(|d| d.contains(t)).count() as f64;
            let idf = ((n - df + 0.5) / (df + 0.5)).ln();
            score += idf * tf * 2.2 / (tf + 1.2 * (0.25 + 0.75 * d.len() as f64 / avgdl));
        }
        if matched && score != 0.0 {
            out.push((i, score));
        }
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| ids[a.0].cmp(&ids[b.0])));
    out
}

pub fn brute_recall(log: &[String], relevant: &HashSet<String>, k: usize) -> f64 {
    let found = log.iter().take(k).filter(|d| relevant.contains(*d)).count();
    found as f64 / relevant.len() as f64
}

pub fn brute_relative_precision(log: &[String], relevant: &HashSet<String>, k: usize) -> f64 {
    let found = log.iter().take(k).filter(|d| relevant.contains(*d)).count();
    found as f64 / k.min(relevant.len()) as f64
}

pub fn brute_ap(ranked: &[String], relevant: &HashSet<String>) -> f64 {
    let mut total = 0.0;
    for (i, d) in ranked.iter().enumerate() {
        if relevant.contains(d) {
            let prec = ranked[..=i].iter().filter(|x| relevant.contains(*x)).count() as f64 / (i + 1) as f64;
            total += prec;
        }
    }
    total / relevant.len() as f64
}

/// F1 as the harmonic mean of precision and recall.
pub fn brute_f1(tp: usize, fp: usize, fn_: usize) -> Option<f64> {
    if tp + fp + fn_ == 0 {
        return None;
    }
    if tp == 0 {
        return Some(0.0);
    }
    let p = tp as f64 / (tp + fp) as f64;
    let r = tp as f64 / (tp + fn_) as f64;
    Some(2.0 * p * r / (p + r))
}

/// Kendall's tau by enumerating every pair.
pub fn brute_kendall(a: &[usize], b: &[usize]) -> f64 {
    let pos = |list: &[usize], x: usize| list.iter().position(|&y| y == x).unwrap();
    let (mut c, mut d) = (0i64, 0i64);
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            let (x, y) = (a[i], a[j]);
            if (pos(b, x) < pos(b, y)) == (i < j) {
                c += 1;
            } else {
                d += 1;
            }
        }
    }
    (c - d) as f64 / (c + d) as f64
}
