//! High-recall technology-assisted review by continuous active learning.
//!
//! A [`Collection`] holds a corpus with its vocabulary, ltc feature vectors
//! and a BM25 index. [`engine::run`] reviews it for one topic with AutoTAR or
//! one of the CAL, SAL and SPL baselines, producing a [`ReviewLog`] that the
//! [`metrics`] module scores against a gold standard. [`testbed`] generates
//! synthetic collections with known relevance.

pub mod classifier;
pub mod cli;
pub mod collection;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod metrics;
pub mod numfmt;
pub mod persist;
pub mod qrels;
pub mod search;
pub mod testbed;
pub mod vectors;

pub use classifier::{Label, LinearModel};
pub use collection::Collection;
pub use corpus::{Analyzer, Corpus, Document, Topic};
pub use engine::{Method, ReviewLog, RunConfig, SeedMode};
pub use error::{Error, Result};
pub use qrels::{Qrels, TopicQrels};
pub use vectors::SparseVector;
