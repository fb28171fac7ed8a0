//! Structural descriptors and approximate LogP for a few molecules.
//!
//! cargo run --example descriptors -- "CC(=O)CC" "c1ccccc1O"

use molforge::chem::{all_descriptors, crippen_logp, parse_valid, LOGP_NOTE};

fn main() {
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = [
            "CC(=O)CC",
            "CC(=O)Nc1ccc(O)cc1",
            "C[N+](C)(C)C",
            "CC(=O)[O-]",
        ]
        .map(String::from)
        .to_vec();
    }
    for s in &inputs {
        let mol = match parse_valid(s) {
            Ok(m) => m,
            Err(e) => {
                println!("{s}\terror: {e}");
                continue;
            }
        };
        let cols: Vec<String> = all_descriptors(&mol)
            .iter()
            .map(|(k, v)| format!("{}={v}", k.name()))
            .collect();
        let logp = crippen_logp(&mol).map_or("n/a".to_string(), |v| format!("{v:.2}"));
        println!("{s}\t{}\tLogP~{logp}", cols.join(" "));
    }
    println!("LogP is {LOGP_NOTE}");
}
