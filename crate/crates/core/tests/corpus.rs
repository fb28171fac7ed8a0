use std::collections::HashSet;

use molforge::corpus::{
    normalize_entities, split_assignment, split_assignment_keyed, DictEntry, Document, EntityDictionary,
    ReplacementKind,
};
use proptest::prelude::*;

fn dictionary() -> EntityDictionary {
    let rows = [
        ("aspirin", "DB00945", "CC(=O)Oc1ccccc1C(=O)O"),
        ("ibuprofen", "DB01050", "CC(C)Cc1ccc(cc1)C(C)C(=O)O"),
        ("acetylsalicylic acid", "DB00945", "CC(=O)Oc1ccccc1C(=O)O"),
    ];
    let entries = rows
        .iter()
        .map(|(s, id, r)| DictEntry {
            surface: s.to_string(),
            id: id.to_string(),
            replacement: r.to_string(),
            kind: ReplacementKind::Smiles,
        })
        .collect();
    EntityDictionary::new(entries, true).unwrap()
}

const WORDS: &[&str] = &[
    "aspirin",
    "Aspirin",
    "IBUPROFEN",
    "acetylsalicylic acid",
    "aspirins",
    "the",
    "dose",
    "acid",
    "pro-aspirin",
    "reduces",
];

proptest! {
    #[test]
    fn substitutions_point_at_replacements(picks in proptest::collection::vec(0..WORDS.len(), 0..30)) {
        let text = picks.iter().map(|&i| WORDS[i]).collect::<Vec<_>>().join(" ");
        let doc = Document { id: "d".into(), text: text.clone(), topic: "t".into() };
        let rec = normalize_entities(&doc, &dictionary());
        let mut last_end = 0;
        for s in &rec.substitutions {
            prop_assert_eq!(&rec.text[s.span.0..s.span.1], s.replacement.as_str());
            prop_assert_eq!(&text[s.source.0..s.source.1], s.surface.as_str());
            prop_assert!(s.span.0 >= last_end);
            last_end = s.span.1;
        }
        // Hyphens are word boundaries; trailing letters are not.
        let expected = picks.iter().filter(|&&i| i <= 3 || i == 8).count();
        prop_assert_eq!(rec.substitutions.len(), expected);
        let rerun = normalize_entities(&doc, &dictionary());
        prop_assert_eq!(rerun, rec);
    }

    #[test]
    fn split_sizes_follow_ratio(n in 0usize..3000, ratio in 0.05f64..0.95, seed in any::<u64>()) {
        let a = split_assignment(n, ratio, seed).unwrap();
        prop_assert_eq!(a.len(), n);
        prop_assert_eq!(a.iter().filter(|&&b| b).count(), (ratio * n as f64).round() as usize);
        prop_assert_eq!(a, split_assignment(n, ratio, seed).unwrap());
    }

    #[test]
    fn keyed_split_never_shares_keys(keys in proptest::collection::vec(0u16..40, 1..500), seed in any::<u64>()) {
        let a = split_assignment_keyed(&keys, 0.9, seed).unwrap();
        let train: HashSet<u16> = keys.iter().zip(&a).filter(|(_, &t)| t).map(|(k, _)| *k).collect();
        let test: HashSet<u16> = keys.iter().zip(&a).filter(|(_, &t)| !t).map(|(k, _)| *k).collect();
        prop_assert!(train.is_disjoint(&test));
    }
}

#[test]
fn invalid_ratio_is_rejected() {
    assert!(split_assignment(10, 1.5, 0).is_err());
    assert!(split_assignment(10, f64::NAN, 0).is_err());
}
