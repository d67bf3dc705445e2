//! BM25 retrieval over an inverted index, used to find seed documents.

use std::cmp::Ordering;

use crate::corpus::{Analyzer, TermId, Vocabulary};

pub const DEFAULT_K1: f64 = 1.2;
pub const DEFAULT_B: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bm25Params {
    pub k1: f64,
    pub b: f64,
}

impl Default for Bm25Params {
    fn default() -> Self {
        Bm25Params {
            k1: DEFAULT_K1,
            b: DEFAULT_B,
        }
    }
}

/// Postings per vocabulary term plus document lengths.
///
/// Documents are referred to by their position in the corpus. Lengths count
/// every token that survives stopword removal, in or out of the vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct InvertedIndex {
    postings: Vec<Vec<(u32, u32)>>,
    doc_len: Vec<u32>,
    avg_doc_len: f64,
    /// Position of each document when ids are sorted ascending.
    id_rank: Vec<u32>,
}

/// One scored document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hit {
    pub doc: usize,
    pub score: f64,
}

/// Result of a BM25 query. `vacuous` is set when the query had no
/// vocabulary terms left after analysis; `hits` is then empty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ranking {
    pub hits: Vec<Hit>,
    pub vacuous: bool,
}

impl InvertedIndex {
    /// `analyzed[i]` are the analyzed terms of document `i`; `doc_ids[i]` its id.
    pub fn build<S: AsRef<str>>(analyzed: &[Vec<String>], doc_ids: &[S], vocab: &Vocabulary) -> Self {
        assert_eq!(analyzed.len(), doc_ids.len());
        let mut postings: Vec<Vec<(u32, u32)>> = vec![Vec::new(); vocab.len()];
        let mut doc_len = Vec::with_capacity(analyzed.len());
        for (doc, terms) in analyzed.iter().enumerate() {
            doc_len.push(terms.len() as u32);
            for (id, tf) in vocab.term_counts(terms) {
                postings[id as usize].push((doc as u32, tf));
            }
        }
        let avg_doc_len = if doc_len.is_empty() {
            0.0
        } else {
            doc_len.iter().map(|&l| l as f64).sum::<f64>() / doc_len.len() as f64
        };
        InvertedIndex {
            postings,
            doc_len,
            avg_doc_len,
            id_rank: id_ranks(doc_ids),
        }
    }

    pub fn num_docs(&self) -> usize {
        self.doc_len.len()
    }

    pub fn avg_doc_len(&self) -> f64 {
        self.avg_doc_len
    }

    pub fn doc_len(&self, doc: usize) -> u32 {
        self.doc_len[doc]
    }

    pub fn postings(&self, term: TermId) -> &[(u32, u32)] {
        &self.postings[term as usize]
    }

    pub fn id_rank(&self, doc: usize) -> u32 {
        self.id_rank[doc]
    }

    /// `ln((N - df + 0.5) / (df + 0.5))`; negative for very common terms.
    pub fn idf(&self, term: TermId) -> f64 {
        let n = self.num_docs() as f64;
        let df = self.postings[term as usize].len() as f64;
        ((n - df + 0.5) / (df + 0.5)).ln()
    }

    /// Scores every document containing at least one of `terms` and returns
    /// the top `k` by (score desc, doc id asc). Zero scores are omitted.
    pub fn rank_terms(&self, terms: &[TermId], k: usize, params: Bm25Params) -> Vec<Hit> {
        let mut terms = terms.to_vec();
        terms.sort_unstable();
        terms.dedup();
        let mut acc: Vec<f64> = vec![0.0; self.num_docs()];
        let mut touched: Vec<u32> = Vec::new();
        let mut seen = vec![false; self.num_docs()];
        for &t in &terms {
            let idf = self.idf(t);
            for &(doc, tf) in self.postings(t) {
                let d = doc as usize;
                let tf = tf as f64;
                let norm = 1.0 - params.b + params.b * self.doc_len[d] as f64 / self.avg_doc_len;
                acc[d] += idf * tf * (params.k1 + 1.0) / (tf + params.k1 * norm);
                if !seen[d] {
                    seen[d] = true;
                    touched.push(doc);
                }
            }
        }
        let mut hits: Vec<Hit> = touched
            .into_iter()
            .map(|d| Hit {
                doc: d as usize,
                score: acc[d as usize],
            })
            .filter(|h| h.score != 0.0)
            .collect();
        hits.sort_by(|a, b| self.hit_order(a, b));
        hits.truncate(k);
        hits
    }

    fn hit_order(&self, a: &Hit, b: &Hit) -> Ordering {
        b.score
            .total_cmp(&a.score)
            .then_with(|| self.id_rank[a.doc].cmp(&self.id_rank[b.doc]))
    }
}

/// Rank of each id in ascending string order.
pub(crate) fn id_ranks<S: AsRef<str>>(doc_ids: &[S]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..doc_ids.len()).collect();
    order.sort_by(|&a, &b| doc_ids[a].as_ref().cmp(doc_ids[b].as_ref()));
    let mut rank = vec![0u32; doc_ids.len()];
    for (r, &d) in order.iter().enumerate() {
        rank[d] = r as u32;
    }
    rank
}

/// Stemmed query terms. Double quotes and the Boolean connective `OR` are
/// treated as whitespace; phrases become bags of words.
pub fn query_terms(query: &str, analyzer: &Analyzer) -> Vec<String> {
    let cleaned: Vec<&str> = query
        .split(|c: char| c.is_whitespace() || c == '"')
        .filter(|w| !w.is_empty() && !w.eq_ignore_ascii_case("or"))
        .collect();
    analyzer.analyze(&cleaned.join(" "))
}

/// BM25 with default parameters over the analyzed `query`.
pub fn bm25_rank(
    query: &str,
    analyzer: &Analyzer,
    vocab: &Vocabulary,
    index: &InvertedIndex,
    k: usize,
) -> Ranking {
    let ids: Vec<TermId> = query_terms(query, analyzer)
        .iter()
        .filter_map(|t| vocab.id(t))
        .collect();
    if ids.is_empty() {
        return Ranking {
            hits: Vec::new(),
            vacuous: true,
        };
    }
    Ranking {
        hits: index.rank_terms(&ids, k.max(1), Bm25Params::default()),
        vacuous: false,
    }
}
