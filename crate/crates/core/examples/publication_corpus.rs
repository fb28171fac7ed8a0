//! Substitute drug names with SMILES in publication text.
//!
//! cargo run --example publication_corpus

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use molforge::corpus::{build_corpus, EntityDictionary};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let dict = EntityDictionary::from_tsv(
        BufReader::new(File::open(dir.join("dictionary.tsv")).unwrap()),
        true,
    )
    .expect("dictionary loads");
    let docs = BufReader::new(File::open(dir.join("documents.jsonl")).unwrap());
    let (records, stats) = build_corpus(docs, &dict).expect("documents read");
    for r in &records {
        println!("{}\t{}", r.id, r.text);
        for s in &r.substitutions {
            println!("  {:?} -> {} ({})", s.surface, s.replacement, s.id);
        }
    }
    println!(
        "\n{} documents, {} records, {} duplicates, {} malformed, {} substitutions",
        stats.documents_in,
        stats.records_out,
        stats.duplicates,
        stats.malformed,
        stats.substitutions
    );
    for t in stats.topic_table() {
        println!("{:<18} {:>3} {:>6.1}%", t.topic, t.count, t.percent);
    }
}
