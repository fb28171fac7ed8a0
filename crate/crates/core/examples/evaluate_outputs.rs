//! Score model outputs against an answer key.
//!
//! cargo run --example evaluate_outputs

use std::collections::HashSet;

use molforge::chem::FingerprintConfig;
use molforge::eval::{canonical_set, evaluate, read_predictions, read_queries, roc_auc};

const PREDICTIONS: &str = r#"{"query_id": "a", "raw_text": "Yes, they interact."}
{"query_id": "b", "raw_text": "No."}
{"query_id": "c", "raw_text": "It is unclear."}
{"query_id": "d", "raw_text": "Yes."}
{"query_id": "p1", "raw_text": "The LogP is 1.1"}
{"query_id": "p2", "raw_text": "LogP = 2.3"}
{"query_id": "p3", "raw_text": "around 2.9"}
{"query_id": "g1", "raw_text": "CCO"}
{"query_id": "g2", "raw_text": "Try c1ccccc1O."}
{"query_id": "g3", "raw_text": "C1CC"}
"#;

const QUERIES: &str = r#"{"query_id": "a", "task": "vs", "label": true}
{"query_id": "b", "task": "vs", "label": false}
{"query_id": "c", "task": "vs", "label": true}
{"query_id": "d", "task": "vs", "label": false}
{"query_id": "p1", "task": "property", "property": "LogP", "target_value": 1.0}
{"query_id": "p2", "task": "property", "property": "LogP", "target_value": 2.0}
{"query_id": "p3", "task": "property", "property": "LogP", "target_value": 3.0}
{"query_id": "g1", "task": "design", "training_set_ref": "train"}
{"query_id": "g2", "task": "design", "training_set_ref": "train"}
{"query_id": "g3", "task": "design", "training_set_ref": "train"}
"#;

fn main() {
    println!(
        "hand AUC: {}",
        roc_auc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap()
    );
    let preds = read_predictions(PREDICTIONS.as_bytes(), "predictions").unwrap();
    let queries = read_queries(QUERIES.as_bytes(), "queries").unwrap();
    let training: HashSet<String> = canonical_set(["CCO", "CC(=O)O"]);
    let report = evaluate(
        &preds,
        &queries,
        &|_| Ok(training.clone()),
        &FingerprintConfig::default(),
    )
    .unwrap();
    print!("{}", report.to_table());
}
