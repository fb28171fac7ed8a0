//! Parse SMILES, check valence, and print canonical and randomized forms.
//!
//! cargo run --example parse_and_canonicalize -- "OCC" "c1ccccc1O"

use molforge::chem::{canonical_smiles, parse_smiles, render_randomized, validate_valence};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let inputs = if args.is_empty() {
        vec![
            "CCO".to_string(),
            "OCC".into(),
            "C1=CC=CC=C1O".into(),
            "CN1C=NC2=C1C(=O)N(C(=O)N2C)C".into(),
            "C1CC".into(),
        ]
    } else {
        args
    };
    for s in inputs {
        match parse_smiles(&s) {
            Ok(mol) => {
                let report = validate_valence(&mol);
                let canon = canonical_smiles(&mol).expect("canonical form");
                println!(
                    "{s}\tformula={}\tvalence={report}\tcanonical={canon}",
                    mol.formula()
                );
                for seed in 0..3 {
                    println!("  seed {seed}: {}", render_randomized(&mol, seed));
                }
            }
            Err(e) => println!("{s}\terror: {e}"),
        }
    }
}
