//! ltc document vectors over a tiny collection.

use autotar::{Analyzer, Collection, Corpus, Document};

fn main() -> autotar::Result<()> {
    let corpus = Corpus::from_documents([
        Document::new("d1", "Oil prices rose as crude supplies fell."),
        Document::new("d2", "Crude oil futures and oil supplies."),
        Document::new("d3", "The central bank held interest rates."),
        Document::new("d4", "Bank rates and crude prices."),
    ])?;
    let c = Collection::build(corpus, Analyzer::smart());
    let vocab = c.vocabulary();
    println!("{} terms kept (collection frequency >= 2)", vocab.len());
    for doc in 0..c.len() {
        let v = c.vector(doc);
        let terms: Vec<String> = v
            .iter()
            .map(|(id, w)| format!("{}={w:.4}", vocab.term(id)))
            .collect();
        println!("{}  |v|={:.6}  {}", c.doc_id(doc), v.norm(), terms.join(" "));
    }
    Ok(())
}
