//! BM25 ranking of a planted testbed for its seed query.

use autotar::testbed::{self, SyntheticSpec};
use autotar::{Analyzer, Collection};

fn main() -> autotar::Result<()> {
    let spec = SyntheticSpec { n: 3_000, rng_seed: 2, ..SyntheticSpec::default() };
    let tb = testbed::generate(&spec)?;
    let gold = tb.qrels.topic(&spec.topic_id).clone();
    let c = Collection::build(tb.corpus, Analyzer::smart());

    println!("query: {}", tb.topic.seed_query);
    let ranking = c.bm25(&tb.topic.seed_query, 10);
    for (rank, hit) in ranking.hits.iter().enumerate() {
        let id = c.doc_id(hit.doc);
        let mark = if gold.is_relevant(id) { "relevant" } else { "" };
        println!("{:>2}. {id} {:.4} {mark}", rank + 1, hit.score);
    }
    // stopwords only: nothing left to match
    println!("vacuous query: {}", c.bm25("the and of", 10).vacuous);
    Ok(())
}
