//! AutoTAR against the CAL, SAL and SPL baselines on one testbed: effort
//! needed for each recall decile.

use autotar::engine::{self, Method, RunConfig, SeedMode};
use autotar::metrics::recall_effort;
use autotar::testbed::{self, SyntheticSpec};
use autotar::{Analyzer, Collection};

fn main() -> autotar::Result<()> {
    let spec = SyntheticSpec { rng_seed: 3, ..SyntheticSpec::default() };
    let tb = testbed::generate(&spec)?;
    let gold = tb.qrels.topic(&spec.topic_id).clone();
    let c = Collection::build(tb.corpus, Analyzer::smart());

    let methods = [
        (Method::AutoTar, SeedMode::RandomRelevant),
        (Method::Cal, SeedMode::Bm25),
        (Method::Sal, SeedMode::Bm25),
        (Method::Spl, SeedMode::Bm25),
    ];
    print!("{:<8}", "recall");
    for (m, _) in &methods {
        print!("{:>9}", m.as_str());
    }
    println!();
    let logs: Vec<_> = methods
        .iter()
        .map(|(m, s)| {
            let config = RunConfig { effort_budget: c.len(), rng_seed: 5, ..RunConfig::new(*m, s.clone()) };
            engine::run(&config, &c, &tb.topic, &gold)
        })
        .collect::<autotar::Result<_>>()?;
    for d in 1..=10 {
        let target = d as f64 / 10.0;
        print!("{target:<8}");
        for log in &logs {
            let e = recall_effort(&log.doc_ids(), &gold, target)?;
            print!("{:>9}", e.effort().map_or("-".to_string(), |e| e.to_string()));
        }
        println!();
    }
    Ok(())
}
