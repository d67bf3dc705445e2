//! Gain curve and recall-effort figures for a run, as written by `eval`.

use autotar::engine::{self, Method, RunConfig, SeedMode};
use autotar::metrics::{gain_curve, recall_effort, RecallEffort};
use autotar::testbed::{self, SyntheticSpec};
use autotar::{Analyzer, Collection};

fn main() -> autotar::Result<()> {
    let spec = SyntheticSpec { n: 4_000, prevalence: 0.02, rng_seed: 6, ..SyntheticSpec::default() };
    let tb = testbed::generate(&spec)?;
    let gold = tb.qrels.topic(&spec.topic_id).clone();
    let c = Collection::build(tb.corpus, Analyzer::smart());
    let config = RunConfig { effort_budget: 400, ..RunConfig::new(Method::AutoTar, SeedMode::Synthetic) };
    let log = engine::run(&config, &c, &tb.topic, &gold)?;
    let ids = log.doc_ids();

    let curve = gain_curve(&ids, &gold, Some(c.len()))?;
    println!("R = {}, prevalence = {:?}", curve.total_relevant, curve.prevalence);
    for target in [0.5, 0.75, 0.9, 1.0] {
        match recall_effort(&ids, &gold, target)? {
            RecallEffort::Achieved(e) => println!("recall {target}: effort {e}"),
            RecallEffort::NotAchieved { terminal_recall } => {
                println!("recall {target}: not reached (ended at {terminal_recall:.3})")
            }
        }
    }
    // every 40th point of the curve
    for line in curve.to_csv().lines().enumerate().filter(|(i, _)| i % 40 == 1).map(|(_, l)| l) {
        println!("{line}");
    }
    Ok(())
}
