//! Relationship QA records with path contexts from the sample graph.
//!
//! cargo run --example kg_instructions

use std::path::PathBuf;

use molforge::forge::{kg_instruction, render_card, KgConfig, TemplateSet};
use molforge::kg::{enclosing_subgraph, load_kg_files, sample_negatives};

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let (kg, stats) = load_kg_files(&dir.join("triples.tsv"), &dir.join("entities.tsv"))
        .expect("sample graph loads");
    println!(
        "{} entities, {} triples, by relation {:?}",
        stats.entities, stats.triples, stats.triples_by_relation
    );

    let sub = enclosing_subgraph(&kg, "DB00945", "D0003", 2).expect("entities exist");
    println!(
        "enclosing subgraph of (Aspirin, Thrombosis): {} entities, {} triples",
        sub.entities.len(),
        sub.triples.len()
    );

    let templates = TemplateSet::default();
    let fact = kg
        .triple("DB00945", "treats", "D0003")
        .expect("fact exists");
    let rec =
        kg_instruction(&kg, &fact, &KgConfig::default(), 0, &templates).expect("record renders");
    print!("\n{}", render_card(&rec));
    println!("\n{}", serde_json::to_string(&rec).unwrap());

    let negatives = sample_negatives(&kg, &[fact], 2, 7).expect("negatives exist");
    for n in negatives {
        let (h, r, t) = kg.labels(&n);
        println!("negative: {h} {r} {t}");
    }
}
