//! A corpus together with everything derived from it: vocabulary, ltc
//! vectors and the BM25 index. Immutable once built.

use rayon::prelude::*;

use crate::corpus::{Analyzer, Corpus, Vocabulary};
use crate::search::{bm25_rank, InvertedIndex, Ranking};
use crate::vectors::{vectorize, vectorize_terms, SparseVector};

#[derive(Debug, Clone)]
pub struct Collection {
    corpus: Corpus,
    analyzer: Analyzer,
    vocabulary: Vocabulary,
    vectors: Vec<SparseVector>,
    index: InvertedIndex,
}

impl Collection {
    pub fn build(corpus: Corpus, analyzer: Analyzer) -> Self {
        let analyzed: Vec<Vec<String>> = corpus
            .documents()
            .par_iter()
            .map(|d| analyzer.analyze(&d.text))
            .collect();
        let vocabulary = Vocabulary::from_analyzed(&analyzed);
        let vectors: Vec<SparseVector> = analyzed
            .par_iter()
            .map(|terms| vectorize_terms(terms, &vocabulary))
            .collect();
        let ids: Vec<&str> = corpus.iter().map(|d| d.id.as_str()).collect();
        let index = InvertedIndex::build(&analyzed, &ids, &vocabulary);
        Collection {
            corpus,
            analyzer,
            vocabulary,
            vectors,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.corpus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.corpus.is_empty()
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }

    pub fn analyzer(&self) -> &Analyzer {
        &self.analyzer
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn index(&self) -> &InvertedIndex {
        &self.index
    }

    pub fn vectors(&self) -> &[SparseVector] {
        &self.vectors
    }

    pub fn vector(&self, doc: usize) -> &SparseVector {
        &self.vectors[doc]
    }

    pub fn doc_id(&self, doc: usize) -> &str {
        &self.corpus.documents()[doc].id
    }

    pub fn position(&self, doc_id: &str) -> Option<usize> {
        self.corpus.position(doc_id)
    }

    /// Rank of the document's id in ascending id order; the tie-breaker.
    pub fn id_rank(&self, doc: usize) -> u32 {
        self.index.id_rank(doc)
    }

    /// ltc vector of arbitrary text against this collection's statistics.
    pub fn vectorize_text(&self, text: &str) -> SparseVector {
        vectorize(text, &self.analyzer, &self.vocabulary)
    }

    pub fn bm25(&self, query: &str, k: usize) -> Ranking {
        bm25_rank(query, &self.analyzer, &self.vocabulary, &self.index, k)
    }

    /// One `doc_id feature_id:weight ...` line per document.
    pub fn vector_dump(&self) -> String {
        let mut out = String::new();
        for (doc, v) in self.corpus.iter().zip(&self.vectors) {
            out.push_str(&doc.id);
            if !v.is_empty() {
                out.push(' ');
                out.push_str(&v.dump());
            }
            out.push('\n');
        }
        out
    }

    /// `term_id<TAB>doc_id:tf ...` per vocabulary term, then document lengths.
    pub fn index_dump(&self) -> String {
        let mut out = format!("# avgdl={}\n", crate::numfmt::sig9(self.index.avg_doc_len()));
        for t in 0..self.vocabulary.len() as u32 {
            out.push_str(&t.to_string());
            for &(d, tf) in self.index.postings(t) {
                out.push_str(&format!("\t{}:{tf}", self.doc_id(d as usize)));
            }
            out.push('\n');
        }
        for d in 0..self.len() {
            out.push_str(&format!("# dl {} {}\n", self.doc_id(d), self.index.doc_len(d)));
        }
        out
    }
}
