//! Text analysis: tokenization, SMART stopwords, then Porter stems.
//!
//!     cargo run --example porter_stemming -- "Consumer prices and price indices"

use autotar::corpus::{stem, tokenize};
use autotar::Analyzer;

fn main() {
    let text = std::env::args()
        .skip(1)
        .collect::<Vec<_>>()
        .join(" ");
    let text = if text.is_empty() {
        "Generalizations about the relational conditioning of hopefulness".to_string()
    } else {
        text
    };
    let analyzer = Analyzer::smart();
    for token in tokenize(&text) {
        if analyzer.is_stopword(&token) {
            println!("{token:<20} (stopword)");
        } else {
            println!("{token:<20} {}", stem(&token));
        }
    }
    println!("analyzed: {:?}", analyzer.analyze(&text));
}
