use rayon::prelude::*;

use super::{ReviewEntry, ReviewLog, RunWarning, STALL_REVIEW_THRESHOLD};
use crate::classifier::{self, Cost, Label, LabeledExample, LinearModel};
use crate::collection::Collection;
use crate::error::Result;
use crate::qrels::{assess, TopicQrels};
use crate::vectors::SparseVector;

/// Mutable bookkeeping shared by all review strategies.
pub(super) struct ReviewState<'c> {
    pub collection: &'c Collection,
    training: &'c TopicQrels,
    reviewed: Vec<bool>,
    num_reviewed: usize,
    /// Reviewed documents with the label used for training, in review order.
    labeled: Vec<(usize, Label)>,
    /// Synthetic seed, trained on as relevant but never reviewed.
    synthetic: Option<SparseVector>,
    pub log: ReviewLog,
    relevant_found: usize,
    budget: usize,
}

impl<'c> ReviewState<'c> {
    pub fn new(collection: &'c Collection, training: &'c TopicQrels, log: ReviewLog, budget: usize) -> Self {
        ReviewState {
            collection,
            training,
            reviewed: vec![false; collection.len()],
            num_reviewed: 0,
            labeled: Vec::new(),
            synthetic: None,
            log,
            relevant_found: 0,
            budget,
        }
    }

    pub fn set_synthetic(&mut self, v: SparseVector) {
        self.synthetic = Some(v);
    }

    pub fn num_reviewed(&self) -> usize {
        self.num_reviewed
    }

    pub fn relevant_found(&self) -> usize {
        self.relevant_found
    }

    pub fn remaining_budget(&self) -> usize {
        self.budget.saturating_sub(self.log.len())
    }

    pub fn num_unreviewed(&self) -> usize {
        self.collection.len() - self.num_reviewed
    }

    pub fn done(&self) -> bool {
        self.remaining_budget() == 0 || self.num_unreviewed() == 0
    }

    /// Unreviewed documents in collection order.
    pub fn unreviewed(&self) -> Vec<usize> {
        (0..self.collection.len()).filter(|&d| !self.reviewed[d]).collect()
    }

    /// Puts `doc` in front of the assessor. `train_label` overrides the
    /// assessor's label for training (the seed is always trained as relevant).
    pub fn review(&mut self, doc: usize, iteration: usize, batch_size: usize, train_label: Option<Label>) {
        debug_assert!(!self.reviewed[doc]);
        let doc_id = self.collection.doc_id(doc);
        let label = assess(doc_id, self.training);
        self.reviewed[doc] = true;
        self.num_reviewed += 1;
        self.labeled.push((doc, train_label.unwrap_or(label)));
        if label.is_relevant() {
            self.relevant_found += 1;
        }
        self.log.entries.push(ReviewEntry {
            doc_id: doc_id.to_string(),
            assessor_label: label,
            iteration,
            batch_size,
        });
        self.check_stall();
    }

    fn check_stall(&mut self) {
        if self.relevant_found == 0 && self.log.len() >= STALL_REVIEW_THRESHOLD && !self.log.is_stalled() {
            log::warn!(
                "topic {}: {} documents reviewed by {} without a single relevant one",
                self.log.topic_id,
                self.log.len(),
                self.log.method
            );
            self.log.warnings.push(RunWarning::Stalled {
                reviewed: self.log.len(),
            });
        }
    }

    pub fn has_both_classes(&self) -> bool {
        let pos = self.synthetic.is_some() || self.labeled.iter().any(|(_, l)| l.is_relevant());
        let neg = self.labeled.iter().any(|(_, l)| !l.is_relevant());
        pos && neg
    }

    /// Trains on every reviewed document plus `presumptive` documents
    /// temporarily labeled not relevant.
    pub fn train(&self, presumptive: &[usize]) -> Result<LinearModel> {
        let mut examples: Vec<LabeledExample<'_>> =
            Vec::with_capacity(self.labeled.len() + presumptive.len() + 1);
        if let Some(v) = &self.synthetic {
            examples.push(LabeledExample::reviewed(v, Label::Relevant));
        }
        examples.extend(
            self.labeled
                .iter()
                .map(|&(d, l)| LabeledExample::reviewed(self.collection.vector(d), l)),
        );
        examples.extend(
            presumptive
                .iter()
                .map(|&d| LabeledExample::presumptive(self.collection.vector(d))),
        );
        classifier::train(&examples, Cost::Auto)
    }

    pub fn scores(&self, model: &LinearModel, candidates: &[usize]) -> Vec<f64> {
        candidates
            .par_iter()
            .map(|&d| model.score(self.collection.vector(d)))
            .collect()
    }

    /// The `k` candidates ranked first by `key` (larger first), ties by
    /// ascending document id.
    pub fn top_k(&self, candidates: &[usize], key: &[f64], k: usize) -> Vec<usize> {
        let mut order: Vec<usize> = (0..candidates.len()).collect();
        let cmp = |a: &usize, b: &usize| {
            key[*b]
                .total_cmp(&key[*a])
                .then_with(|| self.collection.id_rank(candidates[*a]).cmp(&self.collection.id_rank(candidates[*b])))
        };
        let k = k.min(order.len());
        if k == 0 {
            return Vec::new();
        }
        if k < order.len() {
            order.select_nth_unstable_by(k - 1, cmp);
            order.truncate(k);
        }
        order.sort_by(cmp);
        order.into_iter().map(|i| candidates[i]).collect()
    }

    pub fn into_log(self) -> ReviewLog {
        self.log
    }
}
