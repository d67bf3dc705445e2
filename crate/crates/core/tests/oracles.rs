mod common;

use autotar::corpus::{stem, Analyzer, Corpus, Document, Vocabulary};
use autotar::search::InvertedIndex;
use autotar::vectors::{vectorize_counts, vectorize_terms};
use common::kernels;

/// Reference stems produced by an independent implementation of the original
/// 1980 algorithm over a few thousand English words.
#[test]
fn porter_matches_reference_stems() {
    let fixture = include_str!("data/porter_reference.tsv");
    let mut mismatches = Vec::new();
    let mut total = 0;
    for line in fixture.lines() {
        let (word, want) = line.split_once('\t').expect("word<TAB>stem");
        total += 1;
        let got = stem(word);
        if got != want {
            mismatches.push(format!("{word}: got {got}, want {want}"));
        }
    }
    assert!(total > 2000);
    assert!(mismatches.is_empty(), "{} of {total} differ:\n{}", mismatches.len(), mismatches.join("\n"));
}

#[test]
fn test_words_are_analysis_stable() {
    let a = Analyzer::smart();
    for w in common::WORDS {
        assert_eq!(a.analyze(w), vec![w.to_string()], "{w}");
    }
}

#[test]
#[allow(clippy::excessive_precision)]
fn ltc_hand_example() {
    // "a a b" weighted in a 4-document collection with df(a) = 2, df(b) = 1.
    // Frozen from a 40-digit evaluation of (1 + ln 2) ln 2 and ln 4, normalized.
    let docs: Vec<Vec<String>> = [vec!["a", "a", "b", "b"], vec!["a"], vec!["c", "c"], vec!["c"]]
        .iter()
        .map(|d| d.iter().map(|s| s.to_string()).collect())
        .collect();
    let vocab = Vocabulary::from_analyzed(&docs);
    let (a, b) = (vocab.id("a").unwrap(), vocab.id("b").unwrap());
    assert_eq!((vocab.document_freq(a), vocab.document_freq(b)), (2, 1));
    let v = vectorize_counts(&[(a, 2), (b, 1)], &vocab);
    let got: Vec<(u32, f64)> = v.iter().collect();
    assert_eq!(got.len(), 2);
    assert!((got[0].1 - 0.646_128_915_046_473_16).abs() < 1e-12);
    assert!((got[1].1 - 0.763_228_291_627_654_14).abs() < 1e-12);
    let whole = vectorize_terms(&docs[0], &vocab);
    assert!((whole.norm() - 1.0).abs() < 1e-12);
}

#[test]
#[allow(clippy::excessive_precision)]
fn bm25_idf_hand_example() {
    // N = 3, df = 1: ln(2.5 / 1.5)
    let docs: Vec<Vec<String>> = [vec!["x", "x"], vec!["y", "z"], vec!["y", "z"]]
        .iter()
        .map(|d| d.iter().map(|s| s.to_string()).collect())
        .collect();
    let vocab = Vocabulary::from_analyzed(&docs);
    let index = InvertedIndex::build(&docs, &["a", "b", "c"], &vocab);
    let x = vocab.id("x").unwrap();
    assert!((index.idf(x) - 0.510_825_623_765_990_68).abs() < 1e-15);
    // a term in 2 of 3 documents has negative idf, and it is kept
    assert!(index.idf(vocab.id("y").unwrap()) < 0.0);
}

#[test]
fn corpus_round_trip_keeps_analysis() {
    let c = Corpus::from_documents([Document::new("d1", "tab\there"), Document::new("d2", "two\nlines")]).unwrap();
    let back = Corpus::parse(&c.to_lines(), autotar::corpus::CorpusFormat::Lines).unwrap();
    let a = Analyzer::smart();
    for (x, y) in c.iter().zip(back.iter()) {
        assert_eq!(a.analyze(&x.text), a.analyze(&y.text));
    }
}

#[test]
fn ltc_agrees_with_oracle() {
    kernels::check_ltc(40).unwrap();
}

#[test]
fn bm25_agrees_with_oracle() {
    kernels::check_bm25(40).unwrap();
}

#[test]
fn effectiveness_measures_agree_with_oracle() {
    kernels::check_effectiveness_measures(40).unwrap();
}

#[test]
fn kendall_agrees_with_oracle() {
    kernels::check_kendall(40).unwrap();
}
