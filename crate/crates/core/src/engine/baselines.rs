use rand::seq::index;

use super::rng::stream;
use super::state::ReviewState;
use super::{Method, ReviewLog, RunConfig, SeedMode};
use crate::collection::Collection;
use crate::corpus::Topic;
use crate::error::{Error, Result};
use crate::qrels::TopicQrels;

fn check_collection(config: &RunConfig, collection: &Collection) -> Result<()> {
    config.validate()?;
    if collection.len() < 2 {
        return Err(Error::DegenerateCollection(collection.len()));
    }
    Ok(())
}

/// Reviews the query seed set: the top `cal_batch` documents by BM25 on the
/// seed query. When fewer documents match the query, the set is filled up
/// with uniformly sampled unmatched documents.
fn review_query_seed_set(config: &RunConfig, state: &mut ReviewState<'_>, topic: &Topic) -> Result<()> {
    let collection = state.collection;
    let ranking = collection.bm25(&topic.seed_query, config.cal_batch);
    if ranking.vacuous {
        return Err(Error::MissingSeedInput {
            topic: topic.id.clone(),
            reason: "seed query has no terms in the vocabulary".into(),
        });
    }
    let mut seed_set: Vec<usize> = ranking.hits.iter().map(|h| h.doc).collect();
    if seed_set.len() < config.cal_batch {
        let mut matched = vec![false; collection.len()];
        seed_set.iter().for_each(|&d| matched[d] = true);
        let rest: Vec<usize> = (0..collection.len()).filter(|&d| !matched[d]).collect();
        let mut rng = stream(config.rng_seed, &topic.id, config.method, "seed-fill", 0);
        let amount = (config.cal_batch - seed_set.len()).min(rest.len());
        seed_set.extend(index::sample(&mut rng, rest.len(), amount).into_iter().map(|i| rest[i]));
    }
    let take = seed_set.len().min(state.remaining_budget());
    for &doc in &seed_set[..take] {
        state.review(doc, 0, config.cal_batch, None);
    }
    if state.relevant_found() == 0 {
        return Err(Error::StalledRun {
            topic: topic.id.clone(),
            reason: format!("the {take}-document seed set contains no relevant document"),
        });
    }
    Ok(())
}

fn require_both_classes(state: &ReviewState<'_>, topic: &Topic) -> Result<()> {
    if state.has_both_classes() {
        Ok(())
    } else {
        Err(Error::StalledRun {
            topic: topic.id.clone(),
            reason: "reviewed documents contain only one class; cannot train".into(),
        })
    }
}

/// Reviews the remaining documents in descending score order of one model.
fn review_by_ranking(state: &mut ReviewState<'_>, topic: &Topic, iteration: usize) -> Result<()> {
    if state.done() {
        return Ok(());
    }
    require_both_classes(state, topic)?;
    let model = state.train(&[])?;
    let unreviewed = state.unreviewed();
    let scores = state.scores(&model, &unreviewed);
    let take = state.remaining_budget();
    let n = unreviewed.len();
    for doc in state.top_k(&unreviewed, &scores, take) {
        state.review(doc, iteration, n, None);
    }
    Ok(())
}

fn query_seeded_log(topic: &Topic, method: Method) -> ReviewLog {
    // CAL and SAL always start from the seed query, whatever the seed mode.
    ReviewLog::new(&topic.id, method, SeedMode::Bm25)
}

/// Continuous active learning with a 1,000-document query seed set and fixed
/// batches of `cal_batch` top-scoring documents.
pub fn cal_run(config: &RunConfig, collection: &Collection, topic: &Topic, training: &TopicQrels) -> Result<ReviewLog> {
    check_collection(config, collection)?;
    let mut state = ReviewState::new(collection, training, query_seeded_log(topic, config.method), config.effort_budget);
    review_query_seed_set(config, &mut state, topic)?;
    let mut iteration = 1;
    while !state.done() {
        require_both_classes(&state, topic)?;
        let model = state.train(&[])?;
        let unreviewed = state.unreviewed();
        let scores = state.scores(&model, &unreviewed);
        let take = config.cal_batch.min(state.remaining_budget());
        for doc in state.top_k(&unreviewed, &scores, take) {
            state.review(doc, iteration, config.cal_batch, None);
        }
        iteration += 1;
    }
    Ok(state.into_log())
}

/// Uncertainty sampling until `sal_spl_training_size` documents are
/// reviewed, then review down the ranking of the final model.
pub fn sal_run(config: &RunConfig, collection: &Collection, topic: &Topic, training: &TopicQrels) -> Result<ReviewLog> {
    check_collection(config, collection)?;
    let mut state = ReviewState::new(collection, training, query_seeded_log(topic, config.method), config.effort_budget);
    review_query_seed_set(config, &mut state, topic)?;
    let mut iteration = 1;
    while !state.done() && state.num_reviewed() < config.sal_spl_training_size {
        require_both_classes(&state, topic)?;
        let model = state.train(&[])?;
        let unreviewed = state.unreviewed();
        // closest to the decision boundary first
        let closeness: Vec<f64> = state.scores(&model, &unreviewed).into_iter().map(|s| -s.abs()).collect();
        let take = config
            .cal_batch
            .min(config.sal_spl_training_size - state.num_reviewed())
            .min(state.remaining_budget());
        for doc in state.top_k(&unreviewed, &closeness, take) {
            state.review(doc, iteration, config.cal_batch, None);
        }
        iteration += 1;
    }
    review_by_ranking(&mut state, topic, iteration)?;
    Ok(state.into_log())
}

/// A uniform random training set of `sal_spl_training_size` documents, one
/// model, then review down its ranking.
pub fn spl_run(config: &RunConfig, collection: &Collection, topic: &Topic, training: &TopicQrels) -> Result<ReviewLog> {
    check_collection(config, collection)?;
    let log = ReviewLog::new(&topic.id, config.method, config.seed_mode.clone());
    let mut state = ReviewState::new(collection, training, log, config.effort_budget);
    let mut rng = stream(config.rng_seed, &topic.id, config.method, "training-sample", 0);
    let amount = config
        .sal_spl_training_size
        .min(collection.len())
        .min(config.effort_budget);
    for doc in index::sample(&mut rng, collection.len(), amount) {
        state.review(doc, 0, config.sal_spl_training_size, None);
    }
    review_by_ranking(&mut state, topic, 1)?;
    Ok(state.into_log())
}
