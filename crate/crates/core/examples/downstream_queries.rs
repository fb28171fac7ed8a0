//! Virtual-screening, interaction, property and design queries.
//!
//! cargo run --example downstream_queries

use std::path::PathBuf;

use molforge::forge::{downstream_query, render_card, KgConfig, QuerySpec, TemplateSet};
use molforge::kg::load_kg_files;

fn main() {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let (kg, _) = load_kg_files(&dir.join("triples.tsv"), &dir.join("entities.tsv"))
        .expect("sample graph loads");
    let templates = TemplateSet::default();
    let specs = [
        r#"{"kind": "vs", "drug": "DB06151", "target": "P48637"}"#,
        r#"{"kind": "ddi", "a": "DB00945", "b": "DB00682"}"#,
        r#"{"kind": "property", "smiles": "CC(=O)CC", "property": "LogP"}"#,
        r#"{"kind": "design", "constraints": [{"name": "nRing", "target": 1}, {"name": "LogP", "target": 2.0}]}"#,
    ];
    let context = KgConfig::default();
    for (i, text) in specs.iter().enumerate() {
        let spec: QuerySpec = serde_json::from_str(text).expect("spec parses");
        let rec = downstream_query(&spec, Some(&kg), Some(&context), &[], i as u64, &templates)
            .expect("query renders");
        println!("--- {}", rec.task);
        print!("{}", render_card(&rec));
    }
}
