mod common;

use common::{isomorphic, smiles_rows};
use molforge::chem::{
    canonical_smiles, compute_descriptor, morgan_fingerprint, parse_smiles, render_randomized,
    tanimoto, validate_valence, DescriptorKind, Fingerprint,
};
use proptest::prelude::*;

#[test]
fn fixture_molecules_are_valid() {
    for (s, name) in smiles_rows("molecules50.smi") {
        let m = parse_smiles(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        let r = validate_valence(&m);
        assert!(r.valid, "{name}: {r}");
    }
}

#[test]
fn cycle_rank_identity() {
    for (s, _) in smiles_rows("molecules50.smi") {
        let m = parse_smiles(&s).unwrap();
        let rank = m.bond_count() + m.component_count() - m.atom_count();
        assert_eq!(m.ring_info().n_ring, rank, "{s}");
    }
}

#[test]
fn canonical_reparses_isomorphic_after_aromatization() {
    for (s, name) in smiles_rows("molecules50.smi") {
        let m = parse_smiles(&s).unwrap();
        let c = canonical_smiles(&m).unwrap();
        let back = parse_smiles(&c).unwrap_or_else(|e| panic!("{name}: {c}: {e}"));
        assert!(
            isomorphic(&back, &molforge::chem::aromatize(&m)),
            "{name}: {c}"
        );
        assert_eq!(canonical_smiles(&back).unwrap(), c, "{name} not idempotent");
    }
}

#[test]
fn randomized_renderings_agree() {
    for (s, name) in smiles_rows("molecules50.smi") {
        let m = parse_smiles(&s).unwrap();
        let c = canonical_smiles(&m).unwrap();
        let fp = morgan_fingerprint(&m, 2, 2048).unwrap();
        for seed in 0..20 {
            let r = render_randomized(&m, seed);
            let back = parse_smiles(&r).unwrap_or_else(|e| panic!("{name}: {r}: {e}"));
            assert!(isomorphic(&back, &m), "{name}: {r}");
            assert_eq!(canonical_smiles(&back).unwrap(), c, "{name}: {r}");
            assert_eq!(
                morgan_fingerprint(&back, 2, 2048).unwrap(),
                fp,
                "{name}: {r}"
            );
        }
    }
}

#[test]
fn descriptor_oracle_table() {
    for line in common::read_fixture("descriptor_oracle.tsv")
        .lines()
        .skip(1)
    {
        let cols: Vec<&str> = line.split('\t').collect();
        let m = parse_smiles(cols[0]).unwrap();
        for (i, k) in DescriptorKind::ALL.iter().enumerate() {
            let expected: i64 = cols[i + 1].parse().unwrap();
            assert_eq!(compute_descriptor(&m, *k), expected, "{} {k}", cols[0]);
        }
    }
}

proptest! {
    #[test]
    fn tanimoto_properties(a in proptest::collection::vec(0usize..256, 0..40),
                           b in proptest::collection::vec(0usize..256, 0..40)) {
        let fa = Fingerprint::from_bits(256, a).unwrap();
        let fb = Fingerprint::from_bits(256, b).unwrap();
        let ab = tanimoto(&fa, &fb).unwrap();
        prop_assert_eq!(ab, tanimoto(&fb, &fa).unwrap());
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(tanimoto(&fa, &fa).unwrap(), 1.0);
    }

    #[test]
    fn random_renderings_roundtrip(idx in 0usize..50, seed in any::<u64>()) {
        let rows = smiles_rows("molecules50.smi");
        let m = parse_smiles(&rows[idx].0).unwrap();
        let r = render_randomized(&m, seed);
        let back = parse_smiles(&r).unwrap();
        prop_assert!(isomorphic(&back, &m));
        prop_assert_eq!(canonical_smiles(&back).unwrap(), canonical_smiles(&m).unwrap());
    }
}
