//! Cornell `ltc` tf-idf document vectors.
//!
//! For a stem with in-document frequency `tf` and document frequency `df`
//! over `N` documents the raw weight is `(1 + ln tf) * ln(N / df)`; the
//! vector of raw weights is then scaled to unit Euclidean length.

use std::fmt::Write as _;

use crate::corpus::{Analyzer, TermId, Vocabulary};
use crate::numfmt::sig9;

/// Sparse vector with strictly increasing feature ids and nonzero weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseVector {
    ids: Vec<TermId>,
    weights: Vec<f64>,
}

impl SparseVector {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds from `(id, weight)` pairs. Pairs are sorted, zero weights are
    /// dropped, and repeated ids are summed.
    pub fn from_pairs(mut pairs: Vec<(TermId, f64)>) -> Self {
        pairs.sort_by_key(|p| p.0);
        let mut v = SparseVector::new();
        for (id, w) in pairs {
            if v.ids.last() == Some(&id) {
                *v.weights.last_mut().unwrap() += w;
            } else {
                v.ids.push(id);
                v.weights.push(w);
            }
        }
        let keep: Vec<bool> = v.weights.iter().map(|w| *w != 0.0).collect();
        if keep.iter().any(|k| !k) {
            let mut k = keep.iter();
            v.ids.retain(|_| *k.next().unwrap());
            v.weights.retain(|w| *w != 0.0);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[TermId] {
        &self.ids
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (TermId, f64)> + '_ {
        self.ids.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn norm_squared(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Dot product against a dense weight array; ids beyond its end count as 0.
    pub fn dot_dense(&self, dense: &[f64]) -> f64 {
        self.iter()
            .map(|(id, w)| dense.get(id as usize).map_or(0.0, |d| d * w))
            .sum()
    }

    /// Adds `scale * self` into `dense`, growing it if needed.
    pub fn add_scaled_to(&self, dense: &mut Vec<f64>, scale: f64) {
        if let Some(&max) = self.ids.last() {
            if dense.len() <= max as usize {
                dense.resize(max as usize + 1, 0.0);
            }
        }
        for (id, w) in self.iter() {
            dense[id as usize] += scale * w;
        }
    }

    /// Space-separated `feature_id:weight` with 9 significant digits.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (i, (id, w)) in self.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{id}:{}", sig9(w));
        }
        out
    }
}

/// Raw (unnormalized) ltc weight.
pub fn ltc_weight(tf: u32, df: u32, num_docs: usize) -> f64 {
    (1.0 + (tf as f64).ln()) * (num_docs as f64 / df as f64).ln()
}

/// ltc vector from term-id counts. Terms with `df == N` have zero idf and are
/// left out of the vector.
pub fn vectorize_counts(counts: &[(TermId, u32)], vocab: &Vocabulary) -> SparseVector {
    let n = vocab.num_docs();
    let mut ids = Vec::with_capacity(counts.len());
    let mut weights = Vec::with_capacity(counts.len());
    for &(id, tf) in counts {
        let df = vocab.document_freq(id);
        if tf == 0 || df as usize >= n {
            continue;
        }
        let w = ltc_weight(tf, df, n);
        if w != 0.0 {
            ids.push(id);
            weights.push(w);
        }
    }
    let norm: f64 = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    if norm > 0.0 {
        weights.iter_mut().for_each(|w| *w /= norm);
    }
    SparseVector { ids, weights }
}

/// Vectorizes an analyzed term list.
pub fn vectorize_terms<S: AsRef<str>>(terms: &[S], vocab: &Vocabulary) -> SparseVector {
    vectorize_counts(&vocab.term_counts(terms), vocab)
}

/// Vectorizes raw text through the analyzer.
pub fn vectorize(text: &str, analyzer: &Analyzer, vocab: &Vocabulary) -> SparseVector {
    vectorize_terms(&analyzer.analyze(text), vocab)
}
