mod common;

use common::cards;
use molforge::chem::parse_valid;
use molforge::forge::{
    kg_instruction, map_ordered, moltext_instruction, reverse_design_instruction,
    synth_instruction, Constraint, KgConfig, PropertyValue, TemplateSet,
};
use molforge::kg::{Entity, EntityType, KgBuilder};
use proptest::prelude::*;

#[test]
fn kg_card_matches_golden() {
    let (got, want) = cards::kg_card();
    assert_eq!(got, want);
}

#[test]
fn synth_card_matches_golden() {
    let (got, want) = cards::synth_card();
    assert_eq!(got, want);
}

#[test]
fn vs_card_matches_golden() {
    let (got, want) = cards::vs_card();
    assert_eq!(got, want);
}

#[test]
fn kg_records_deterministic_under_parallelism() {
    let mut b = KgBuilder::new();
    for i in 0..40 {
        b.add_entity(Entity {
            id: format!("e{i}"),
            entity_type: if i % 2 == 0 {
                EntityType::Drug
            } else {
                EntityType::Gene
            },
            name: format!("n{i}"),
            smiles: None,
        })
        .unwrap();
    }
    for i in 0..40 {
        for j in [1, 3, 7] {
            b.add(&format!("e{i}"), "binds", &format!("e{}", (i + j) % 40))
                .unwrap();
        }
    }
    let kg = b.build();
    let tpl = TemplateSet::default();
    let cfg = KgConfig::default();
    let run = || {
        map_ordered(kg.triples(), |f| {
            serde_json::to_string(&kg_instruction(&kg, f, &cfg, 7, &tpl).unwrap()).unwrap()
        })
    };
    let sequential: Vec<String> = kg
        .triples()
        .iter()
        .map(|f| serde_json::to_string(&kg_instruction(&kg, f, &cfg, 7, &tpl).unwrap()).unwrap())
        .collect();
    assert_eq!(run(), sequential);
    assert_eq!(run(), run());
}

const POOL: &[&str] = &[
    "CCO",
    "C1CC",
    "c1ccccc1",
    "C(C)(C)(C)(C)C",
    "CC(=O)O",
    "N1CC1",
    "[NH4]",
    "c1cccc1",
    "O=C=O",
];

proptest! {
    // No record ever carries a SMILES that fails the validity gate.
    #[test]
    fn validity_gate(idx in 0..POOL.len(), seed in any::<u64>()) {
        let s = POOL[idx];
        let valid = parse_valid(s).is_ok();
        let tpl = TemplateSet::default();
        let outcomes = [
            moltext_instruction(s, "text", seed, &tpl).is_ok(),
            synth_instruction(s, &[("QED", PropertyValue::Number(0.5))], seed, &tpl).is_ok(),
            reverse_design_instruction(s, &[Constraint::flag("IsValid", true)], seed, &tpl).is_ok(),
        ];
        for ok in outcomes {
            prop_assert_eq!(ok, valid);
        }
    }
}
