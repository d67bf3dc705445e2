//! Generates a planted-topic testbed and writes it out in the files the
//! command line tool reads.
//!
//!     cargo run --example synthetic_testbed -- /tmp/testbed

use autotar::testbed::{self, SyntheticSpec};

fn main() -> autotar::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "testbed".to_string());
    let spec = SyntheticSpec {
        n: 5_000,
        prevalence: 0.02,
        topical_mixing: 0.7,
        rng_seed: 12,
        ..SyntheticSpec::default()
    };
    let tb = testbed::generate(&spec)?;
    println!("{} documents, {} relevant", tb.corpus.len(), spec.num_relevant());
    println!("seed query: {}", tb.topic.seed_query);
    println!("description: {}", tb.topic.description);
    println!("topical vocabulary: {} terms, e.g. {}", tb.topical_terms.len(), tb.topical_terms[..3].join(" "));
    let doc = tb.corpus.get(0).expect("nonempty corpus");
    println!("{}: {}...", doc.id, doc.text.chars().take(70).collect::<String>());
    tb.write(&out, &spec)?;
    println!("written to {out}/");
    Ok(())
}
