//! Train the linear SVM on half of a testbed and score the other half.

use autotar::classifier::{train_with, Label, LabeledExample, TrainOptions};
use autotar::testbed::{self, SyntheticSpec};
use autotar::{Analyzer, Collection};

fn main() -> autotar::Result<()> {
    let spec = SyntheticSpec { n: 2_000, prevalence: 0.05, rng_seed: 4, ..SyntheticSpec::default() };
    let tb = testbed::generate(&spec)?;
    let gold = tb.qrels.topic(&spec.topic_id).clone();
    let c = Collection::build(tb.corpus, Analyzer::smart());
    let label = |d: usize| Label::from_bool(gold.is_relevant(c.doc_id(d)));

    let half = c.len() / 2;
    let examples: Vec<LabeledExample<'_>> = (0..half).map(|d| LabeledExample::reviewed(c.vector(d), label(d))).collect();
    let (model, report) = train_with(&examples, &TrainOptions::default())?;
    println!(
        "C={} primal={:.6} dual={:.6} gap={:.2e} passes={}",
        report.cost,
        report.primal,
        report.dual,
        report.relative_gap(),
        report.passes
    );

    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for d in half..c.len() {
        match (model.score(c.vector(d)) > 0.0, label(d).is_relevant()) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            _ => {}
        }
    }
    println!("held out: tp={tp} fp={fp} fn={fn_} F1={:?}", autotar::metrics::f1(tp, fp, fn_));
    Ok(())
}
