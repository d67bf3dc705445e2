//! How much does a noisy assessor change the ranking of review systems?
//! Several runs are scored by MAP under the clean and a noisy qrels, and the
//! two system rankings are compared with Kendall's tau.

use std::collections::BTreeMap;

use autotar::engine::{self, Method, RunConfig, SeedMode};
use autotar::metrics::qrels_rank_correlation;
use autotar::testbed::{self, noisy_qrels, SyntheticSpec};
use autotar::{Analyzer, Collection};

fn main() -> autotar::Result<()> {
    let spec = SyntheticSpec { n: 3_000, prevalence: 0.03, rng_seed: 9, ..SyntheticSpec::default() };
    let tb = testbed::generate(&spec)?;
    let gold = tb.qrels.topic(&spec.topic_id).clone();
    let c = Collection::build(tb.corpus, Analyzer::smart());

    let mut runs: BTreeMap<String, BTreeMap<String, Vec<String>>> = BTreeMap::new();
    let systems = [
        ("autotar", Method::AutoTar, 300),
        ("autotar-short", Method::AutoTar, 60),
        ("cal", Method::Cal, 1_500),
        ("spl", Method::Spl, 1_500),
    ];
    for (name, method, budget) in systems {
        let config = RunConfig {
            effort_budget: budget,
            cal_batch: 200,
            sal_spl_training_size: 1_000,
            ..RunConfig::new(method, SeedMode::RandomRelevant)
        };
        let log = engine::run(&config, &c, &tb.topic, &gold)?;
        let ids = log.doc_ids().into_iter().map(str::to_string).collect();
        runs.insert(name.to_string(), BTreeMap::from([(spec.topic_id.clone(), ids)]));
    }

    for rate in [0.0, 0.05, 0.2] {
        let noisy = noisy_qrels(&tb.qrels, rate, 1)?;
        let rc = qrels_rank_correlation(&tb.qrels, &noisy, &runs)?;
        let order: Vec<String> = rc.ranking_b.iter().map(|(s, map)| format!("{s} {map:.3}")).collect();
        println!("noise {rate:.2}: tau {:+.3}  [{}]", rc.tau, order.join(", "));
    }
    Ok(())
}
