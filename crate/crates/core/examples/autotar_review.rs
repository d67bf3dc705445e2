//! One AutoTAR review of a planted topic, printed batch by batch.

use autotar::engine::{self, Method, RunConfig, SeedMode};
use autotar::metrics::recall_at;
use autotar::testbed::{self, SyntheticSpec};
use autotar::{Analyzer, Collection};

fn main() -> autotar::Result<()> {
    let spec = SyntheticSpec { rng_seed: 1, ..SyntheticSpec::default() };
    let tb = testbed::generate(&spec)?;
    let gold = tb.qrels.topic(&spec.topic_id).clone();
    let c = Collection::build(tb.corpus, Analyzer::smart());

    let config = RunConfig {
        effort_budget: 500,
        rng_seed: 7,
        ..RunConfig::new(Method::AutoTar, SeedMode::Bm25)
    };
    let log = engine::run(&config, &c, &tb.topic, &gold)?;
    println!("seed document: {:?}", log.seed_doc);
    let ids = log.doc_ids();
    let mut end = 0;
    for iteration in 0..=log.entries.last().map_or(0, |e| e.iteration) {
        let batch = log.entries.iter().filter(|e| e.iteration == iteration).count();
        end += batch;
        let found = log.entries[..end].iter().filter(|e| e.assessor_label.is_relevant()).count();
        println!(
            "iteration {iteration:>2}: batch {batch:>3}, effort {end:>3}, relevant {found:>3}, recall {:.3}",
            recall_at(&ids, &gold, end)?
        );
    }
    Ok(())
}
