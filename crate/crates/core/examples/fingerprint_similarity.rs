//! Pairwise Tanimoto similarity of Morgan fingerprints.
//!
//! cargo run --example fingerprint_similarity -- CCO CCN c1ccccc1

use molforge::chem::{morgan_fingerprint, parse_valid, tanimoto, DEFAULT_RADIUS, DEFAULT_WIDTH};

fn main() {
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = [
            "CC(=O)Oc1ccccc1C(=O)O",
            "OC(=O)c1ccccc1O",
            "CC(C)Cc1ccc(cc1)C(C)C(=O)O",
            "CCO",
        ]
        .map(String::from)
        .to_vec();
    }
    let fps: Vec<_> = inputs
        .iter()
        .map(|s| {
            let mol = parse_valid(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            morgan_fingerprint(&mol, DEFAULT_RADIUS, DEFAULT_WIDTH).expect("default width is valid")
        })
        .collect();
    for (s, fp) in inputs.iter().zip(&fps) {
        println!("{s}\t{} bits set", fp.popcount());
    }
    for i in 0..fps.len() {
        for j in i + 1..fps.len() {
            let sim = tanimoto(&fps[i], &fps[j]).expect("same width");
            println!("{:.3}\t{} ~ {}", sim, inputs[i], inputs[j]);
        }
    }
}
