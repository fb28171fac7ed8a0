//! Copy the sample inputs to a temporary directory, run the sample config
//! there and print the manifest.
//!
//! cargo run --example pipeline

use std::path::PathBuf;

use molforge::pipeline::{run, Overrides};

fn main() {
    let sample = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/sample");
    let work = tempfile::tempdir().expect("temporary directory");
    for entry in std::fs::read_dir(&sample).unwrap() {
        let entry = entry.unwrap();
        if entry.file_type().unwrap().is_file() {
            std::fs::copy(entry.path(), work.path().join(entry.file_name())).unwrap();
        }
    }
    match run(&work.path().join("forge.toml"), &Overrides::default()) {
        Ok(manifest) => {
            println!("{}", serde_json::to_string_pretty(&manifest).unwrap());
            for s in &manifest.stages {
                println!(
                    "{:<14} {:<16} in={:<3} out={:<3} skipped={:?}",
                    s.name, s.kind, s.records_in, s.records_out, s.skipped
                );
            }
            let table = std::fs::read_to_string(work.path().join("out/eval.txt")).unwrap();
            print!("\n{table}");
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
