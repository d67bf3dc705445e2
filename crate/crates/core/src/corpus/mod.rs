//! Document collections, topics, and the text analysis pipeline.
//!
//! Text flows through a fixed pipeline: [`tokenize`] splits on anything that
//! is not an ASCII letter and case-folds, stopwords are dropped on the raw
//! token, and the survivors are reduced with the Porter stemmer. The
//! [`Vocabulary`] keeps the stems that occur at least twice in the whole
//! collection.

mod ingest;
pub mod porter;
mod vocabulary;

use std::collections::{HashMap, HashSet};

pub use ingest::{read_topics, CorpusFormat};
pub use porter::stem;
pub use vocabulary::{TermId, Vocabulary};

use crate::error::{Error, Result};

/// The SMART stopword list (571 entries).
pub const SMART_STOPWORDS: &str = include_str!("../../data/smart_stopwords.txt");

/// One identified document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub id: String,
    pub text: String,
}

impl Document {
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            text: text.into(),
        }
    }
}

/// An ordered collection of documents with unique ids.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    docs: Vec<Document>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a corpus, rejecting duplicate or empty ids.
    pub fn from_documents(docs: impl IntoIterator<Item = Document>) -> Result<Self> {
        let mut corpus = Corpus::new();
        for doc in docs {
            corpus.push(doc)?;
        }
        Ok(corpus)
    }

    pub fn push(&mut self, doc: Document) -> Result<()> {
        if doc.id.is_empty() {
            return Err(Error::malformed(
                format!("document {}", self.docs.len() + 1),
                "empty document id",
            ));
        }
        if self.by_id.contains_key(&doc.id) {
            return Err(Error::DuplicateDocId(doc.id));
        }
        self.by_id.insert(doc.id.clone(), self.docs.len());
        self.docs.push(doc);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn documents(&self) -> &[Document] {
        &self.docs
    }

    pub fn get(&self, index: usize) -> Option<&Document> {
        self.docs.get(index)
    }

    pub fn position(&self, doc_id: &str) -> Option<usize> {
        self.by_id.get(doc_id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Document> {
        self.docs.iter()
    }
}

/// A review topic: its keyword seed query and a prose description.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Topic {
    pub id: String,
    pub seed_query: String,
    pub description: String,
}

/// Maximal runs of ASCII letters, lowercased. Everything else separates.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_ascii_alphabetic())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_ascii_lowercase())
        .collect()
}

/// Tokenize, drop stopwords, stem.
#[derive(Debug, Clone)]
pub struct Analyzer {
    stopwords: HashSet<String>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::smart()
    }
}

impl Analyzer {
    /// The default pipeline with the bundled SMART stopword list.
    pub fn smart() -> Self {
        Analyzer::with_stopwords(SMART_STOPWORDS.lines())
    }

    pub fn with_stopwords<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let stopwords = words
            .into_iter()
            .map(|w| w.as_ref().trim().to_ascii_lowercase())
            .filter(|w| !w.is_empty())
            .collect();
        Analyzer { stopwords }
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }

    /// Stemmed, non-stopword terms of `text`, in order.
    pub fn analyze(&self, text: &str) -> Vec<String> {
        tokenize(text)
            .into_iter()
            .filter(|t| !self.is_stopword(t))
            .map(|t| stem(&t))
            // "s" stems to nothing
            .filter(|t| !t.is_empty())
            .collect()
    }
}
