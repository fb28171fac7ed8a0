//! Property-table instructions and reverse design instructions.
//!
//! cargo run --example expert_synthetic

use molforge::forge::{
    render_card, reverse_design_instruction, synth_instruction, Constraint, PropertyTable,
    TemplateSet,
};

fn main() {
    let templates = TemplateSet::default();
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/sample/properties.tsv");
    let table = PropertyTable::from_reader(std::fs::read_to_string(path).unwrap().as_bytes())
        .expect("table parses");
    for (i, row) in table.rows.iter().enumerate() {
        match synth_instruction(
            &row.smiles,
            &row.present(&table.schema),
            i as u64,
            &templates,
        ) {
            Ok(rec) => println!("{}", render_card(&rec)),
            Err(e) => println!("line {}: skipped: {e}\n", row.line),
        }
    }

    let constraints: Vec<Constraint> =
        serde_json::from_str(r#"[{"name": "LogP", "target": 0.5}, {"name": "nHD", "target": 2}]"#)
            .unwrap();
    for seed in 0..2 {
        let rec = reverse_design_instruction("CC(=O)Nc1ccc(O)cc1", &constraints, seed, &templates)
            .expect("valid molecule");
        println!("{}", render_card(&rec));
    }
}
