use rand::seq::index;

use super::rng::stream;
use super::state::ReviewState;
use super::{select_seed, ReviewLog, RunConfig, Seed};
use crate::classifier::Label;
use crate::collection::Collection;
use crate::corpus::Topic;
use crate::error::{Error, Result};
use crate::qrels::TopicQrels;

/// Batch sizes `B, B + ceil(B / d), ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchSchedule {
    next: usize,
    divisor: usize,
}

impl BatchSchedule {
    pub fn new(initial: usize, divisor: usize) -> Self {
        assert!(initial >= 1 && divisor >= 1);
        BatchSchedule { next: initial, divisor }
    }

    pub fn current(&self) -> usize {
        self.next
    }
}

impl Default for BatchSchedule {
    fn default() -> Self {
        BatchSchedule::new(1, 10)
    }
}

impl Iterator for BatchSchedule {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        let b = self.next;
        self.next = b.saturating_add(b.div_ceil(self.divisor));
        Some(b)
    }
}

/// Continuous active learning from a single seed.
///
/// Each round trains on every reviewed document plus a fresh uniform sample
/// of unreviewed documents presumed not relevant, reviews the top `B`
/// unreviewed documents by score, and grows `B` by `ceil(B / 10)`. The
/// presumptive sample is discarded after training. Runs until the effort
/// budget is spent or the collection is exhausted.
pub fn autotar_run(config: &RunConfig, collection: &Collection, topic: &Topic, training: &TopicQrels) -> Result<ReviewLog> {
    config.validate()?;
    if collection.len() < 2 {
        return Err(Error::DegenerateCollection(collection.len()));
    }
    let method = config.method;
    let mut seed_rng = stream(config.rng_seed, &topic.id, method, "seed", 0);
    let seed = select_seed(&config.seed_mode, topic, collection, training, &mut seed_rng)?;

    let log = ReviewLog::new(&topic.id, method, config.seed_mode.clone());
    let mut state = ReviewState::new(collection, training, log, config.effort_budget);
    match seed {
        Seed::Document(doc) => {
            state.log.seed_doc = Some(collection.doc_id(doc).to_string());
            state.review(doc, 0, 1, Some(Label::Relevant));
        }
        Seed::Synthetic(v) => state.set_synthetic(v),
    }

    let mut schedule = BatchSchedule::new(config.initial_batch, config.growth_divisor);
    let mut iteration = 1usize;
    while !state.done() {
        let batch = schedule.next().expect("infinite schedule");
        let unreviewed = state.unreviewed();

        let mut rng = stream(config.rng_seed, &topic.id, method, "presumptive", iteration as u64);
        let amount = config.presumptive_count.min(unreviewed.len());
        let mut picks = index::sample(&mut rng, unreviewed.len(), amount).into_vec();
        picks.sort_unstable();
        let presumptive: Vec<usize> = picks.into_iter().map(|i| unreviewed[i]).collect();

        let model = state.train(&presumptive)?;
        let scores = state.scores(&model, &unreviewed);
        let take = batch.min(state.remaining_budget());
        for doc in state.top_k(&unreviewed, &scores, take) {
            state.review(doc, iteration, batch, None);
        }
        iteration += 1;
    }
    Ok(state.into_log())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_prefix() {
        let got: Vec<usize> = BatchSchedule::default().take(17).collect();
        assert_eq!(got, [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 15, 17, 19, 21, 24]);
    }

    #[test]
    fn ten_rounds_review_55() {
        assert_eq!(BatchSchedule::default().take(10).sum::<usize>(), 55);
    }

    #[test]
    fn schedule_saturates() {
        let mut s = BatchSchedule::new(usize::MAX - 1, 10);
        s.next();
        assert_eq!(s.current(), usize::MAX);
    }
}
