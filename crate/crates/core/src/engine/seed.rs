use rand::Rng;

use super::SeedMode;
use crate::collection::Collection;
use crate::corpus::Topic;
use crate::error::{Error, Result};
use crate::qrels::TopicQrels;
use crate::vectors::SparseVector;

/// The initial relevant example.
#[derive(Debug, Clone, PartialEq)]
pub enum Seed {
    /// A document of the collection (position in the corpus).
    Document(usize),
    /// A pseudo-document that is not part of the collection.
    Synthetic(SparseVector),
}

pub fn select_seed<R: Rng + ?Sized>(
    mode: &SeedMode,
    topic: &Topic,
    collection: &Collection,
    training: &TopicQrels,
    rng: &mut R,
) -> Result<Seed> {
    match mode {
        SeedMode::Bm25 => {
            if topic.seed_query.trim().is_empty() {
                return Err(Error::MissingSeedInput {
                    topic: topic.id.clone(),
                    reason: "BM25 seeding needs a seed query".into(),
                });
            }
            let ranking = collection.bm25(&topic.seed_query, collection.len().max(1));
            ranking
                .hits
                .iter()
                .find(|h| training.is_relevant(collection.doc_id(h.doc)))
                .map(|h| Seed::Document(h.doc))
                .ok_or_else(|| Error::SeedNotFound {
                    topic: topic.id.clone(),
                })
        }
        SeedMode::RandomRelevant => {
            let candidates: Vec<usize> = training
                .relevant()
                .filter_map(|id| collection.position(id))
                .collect();
            if candidates.is_empty() {
                return Err(Error::MissingSeedInput {
                    topic: topic.id.clone(),
                    reason: "no training-relevant document in the collection".into(),
                });
            }
            Ok(Seed::Document(candidates[rng.random_range(0..candidates.len())]))
        }
        SeedMode::Synthetic => {
            if topic.description.trim().is_empty() {
                return Err(Error::MissingSeedInput {
                    topic: topic.id.clone(),
                    reason: "synthetic seeding needs a description".into(),
                });
            }
            let v = collection.vectorize_text(&topic.description);
            if v.is_empty() {
                return Err(Error::VacuousSeed {
                    topic: topic.id.clone(),
                });
            }
            Ok(Seed::Synthetic(v))
        }
        SeedMode::Explicit(id) => collection
            .position(id)
            .map(Seed::Document)
            .ok_or_else(|| Error::UnknownDocId(id.clone())),
    }
}
