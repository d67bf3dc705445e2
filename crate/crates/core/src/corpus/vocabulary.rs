use std::collections::HashMap;

use rayon::prelude::*;

use super::{Analyzer, Corpus};

/// Dense feature index in `[0, vocabulary.len())`.
pub type TermId = u32;

/// Stemmed terms occurring at least twice in the collection, with their
/// collection and document frequencies. Feature ids follow lexicographic
/// term order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Vocabulary {
    terms: Vec<String>,
    ids: HashMap<String, TermId>,
    collection_freq: Vec<u64>,
    document_freq: Vec<u32>,
    num_docs: usize,
}

/// Minimum collection frequency for a term to become a feature.
pub const MIN_COLLECTION_FREQ: u64 = 2;

impl Vocabulary {
    pub fn build(corpus: &Corpus, analyzer: &Analyzer) -> Vocabulary {
        let analyzed: Vec<Vec<String>> = corpus
            .documents()
            .par_iter()
            .map(|d| analyzer.analyze(&d.text))
            .collect();
        Vocabulary::from_analyzed(&analyzed)
    }

    /// Builds from already-analyzed documents (one term list per document).
    pub fn from_analyzed(docs: &[Vec<String>]) -> Vocabulary {
        let mut counts: HashMap<&str, (u64, u32)> = HashMap::new();
        for terms in docs {
            let mut seen: HashMap<&str, ()> = HashMap::new();
            for t in terms {
                let entry = counts.entry(t.as_str()).or_insert((0, 0));
                entry.0 += 1;
                if seen.insert(t.as_str(), ()).is_none() {
                    entry.1 += 1;
                }
            }
        }
        let mut kept: Vec<(&str, u64, u32)> = counts
            .into_iter()
            .filter(|(_, (cf, _))| *cf >= MIN_COLLECTION_FREQ)
            .map(|(t, (cf, df))| (t, cf, df))
            .collect();
        kept.sort_unstable_by(|a, b| a.0.cmp(b.0));

        let mut vocab = Vocabulary {
            num_docs: docs.len(),
            ..Default::default()
        };
        for (i, (term, cf, df)) in kept.into_iter().enumerate() {
            vocab.ids.insert(term.to_string(), i as TermId);
            vocab.terms.push(term.to_string());
            vocab.collection_freq.push(cf);
            vocab.document_freq.push(df);
        }
        vocab
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of documents in the governing collection.
    pub fn num_docs(&self) -> usize {
        self.num_docs
    }

    pub fn id(&self, term: &str) -> Option<TermId> {
        self.ids.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> &str {
        &self.terms[id as usize]
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn collection_freq(&self, id: TermId) -> u64 {
        self.collection_freq[id as usize]
    }

    pub fn document_freq(&self, id: TermId) -> u32 {
        self.document_freq[id as usize]
    }

    /// Term-id counts for an analyzed term list, sorted by id. Terms outside
    /// the vocabulary are dropped.
    pub fn term_counts<S: AsRef<str>>(&self, terms: &[S]) -> Vec<(TermId, u32)> {
        let mut ids: Vec<TermId> = terms.iter().filter_map(|t| self.id(t.as_ref())).collect();
        ids.sort_unstable();
        let mut out: Vec<(TermId, u32)> = Vec::new();
        for id in ids {
            match out.last_mut() {
                Some((last, n)) if *last == id => *n += 1,
                _ => out.push((id, 1)),
            }
        }
        out
    }

    /// `feature_id<TAB>term<TAB>cf<TAB>df` lines after an `# N=<n>` header.
    pub fn to_tsv(&self) -> String {
        let mut out = format!("# N={}\n", self.num_docs);
        for (i, term) in self.terms.iter().enumerate() {
            out.push_str(&format!(
                "{i}\t{term}\t{}\t{}\n",
                self.collection_freq[i], self.document_freq[i]
            ));
        }
        out
    }
}
