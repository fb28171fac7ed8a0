//! Huckel-rule aromaticity perception used to merge Kekulé and aromatic
//! spellings of the same ring before canonical ranking.
//!
//! Lowercase input atoms stay aromatic as written. Kekulé rings are tested
//! one SSSR ring at a time, and as pairs of fused rings (the envelope of two
//! rings sharing a bond). Rings are re-tested in passes against a snapshot of
//! the previous pass until nothing changes, so a ring whose double bond points
//! into an already aromatic neighbor can be picked up on a later pass. Larger
//! fused systems that only satisfy the 4n+2 rule as a whole are left in their
//! Kekulé form.

use std::collections::HashSet;

use super::molecule::{BondOrder, Molecule};

struct RingCandidate {
    atoms: Vec<usize>,
    bonds: Vec<usize>,
}

/// Returns a copy of `mol` with Huckel-aromatic Kekulé rings rewritten in
/// aromatic form. Attached hydrogen counts are preserved.
pub fn aromatize(mol: &Molecule) -> Molecule {
    let rings: Vec<RingCandidate> = mol
        .ring_info()
        .rings
        .iter()
        .map(|ring| {
            let n = ring.len();
            let bonds = (0..n)
                .map(|i| {
                    let (a, b) = (ring[i], ring[(i + 1) % n]);
                    mol.neighbors(a)
                        .iter()
                        .find(|(x, _)| *x == b)
                        .map(|(_, bi)| *bi)
                        .expect("ring atoms are bonded")
                })
                .collect();
            RingCandidate {
                atoms: ring.clone(),
                bonds,
            }
        })
        .collect();

    let mut aromatic_atoms: Vec<bool> = mol.atoms().iter().map(|a| a.aromatic).collect();
    let mut aromatic_bonds: Vec<bool> = mol
        .bonds()
        .iter()
        .map(|b| b.order == BondOrder::Aromatic)
        .collect();
    let mut done: Vec<bool> = rings
        .iter()
        .map(|r| r.bonds.iter().all(|b| aromatic_bonds[*b]))
        .collect();

    loop {
        let snapshot_atoms = aromatic_atoms.clone();
        let mut newly = Vec::new();
        for (ri, ring) in rings.iter().enumerate() {
            if done[ri] {
                continue;
            }
            let bonds: HashSet<usize> = ring.bonds.iter().copied().collect();
            if is_huckel(mol, &ring.atoms, &bonds, &snapshot_atoms) {
                newly.push(ri);
            }
        }
        for i in 0..rings.len() {
            for j in i + 1..rings.len() {
                if done[i] && done[j] {
                    continue;
                }
                let bi: HashSet<usize> = rings[i].bonds.iter().copied().collect();
                let bj: HashSet<usize> = rings[j].bonds.iter().copied().collect();
                if bi.is_disjoint(&bj) {
                    continue;
                }
                let envelope: HashSet<usize> = bi.symmetric_difference(&bj).copied().collect();
                let mut atoms: Vec<usize> = rings[i].atoms.clone();
                atoms.extend(
                    rings[j]
                        .atoms
                        .iter()
                        .filter(|a| !rings[i].atoms.contains(a)),
                );
                if is_huckel(mol, &atoms, &envelope, &snapshot_atoms) {
                    newly.push(i);
                    newly.push(j);
                }
            }
        }
        let mut changed = false;
        for ri in newly {
            if done[ri] {
                continue;
            }
            done[ri] = true;
            changed = true;
            for &a in &rings[ri].atoms {
                aromatic_atoms[a] = true;
            }
            for &b in &rings[ri].bonds {
                aromatic_bonds[b] = true;
            }
        }
        if !changed {
            break;
        }
    }

    let mut atoms = mol.atoms().to_vec();
    for (a, flag) in atoms.iter_mut().zip(&aromatic_atoms) {
        a.aromatic = *flag;
    }
    let mut bonds = mol.bonds().to_vec();
    for (b, flag) in bonds.iter_mut().zip(&aromatic_bonds) {
        if *flag {
            b.order = BondOrder::Aromatic;
        }
    }
    Molecule::assemble(atoms, bonds, mol.source_smiles().to_string(), false)
}

fn is_huckel(
    mol: &Molecule,
    atoms: &[usize],
    ring_bonds: &HashSet<usize>,
    aromatic: &[bool],
) -> bool {
    let mut total = 0u32;
    for &a in atoms {
        match pi_electrons(mol, a, ring_bonds, aromatic) {
            Some(e) => total += e,
            None => return false,
        }
    }
    total % 4 == 2
}

/// Pi electrons an atom donates to the ring made of `ring_bonds`, or `None`
/// if the atom cannot be part of an aromatic ring.
fn pi_electrons(
    mol: &Molecule,
    atom: usize,
    ring_bonds: &HashSet<usize>,
    aromatic: &[bool],
) -> Option<u32> {
    let a = mol.atom(atom);
    let z = a.element.atomic_number();
    let charge = a.formal_charge;
    let connections = mol.degree(atom) + a.hydrogen_count() as usize;

    let mut in_ring_double = false;
    let mut exo_double_to_aromatic = false;
    let mut exo_double = false;
    let mut in_ring_aromatic = 0;
    for &(n, bi) in mol.neighbors(atom) {
        let bond = &mol.bonds()[bi];
        match bond.order {
            BondOrder::Triple | BondOrder::Quadruple => return None,
            BondOrder::Double if ring_bonds.contains(&bi) => in_ring_double = true,
            BondOrder::Double if bond.in_ring && aromatic[n] => exo_double_to_aromatic = true,
            BondOrder::Double => exo_double = true,
            BondOrder::Aromatic if ring_bonds.contains(&bi) => in_ring_aromatic += 1,
            _ => {}
        }
    }
    if in_ring_double || exo_double_to_aromatic {
        return Some(1);
    }
    if exo_double {
        return Some(0);
    }
    if a.aromatic && in_ring_aromatic > 0 {
        return match (z, charge) {
            (5, _) => Some(0),
            (6, 0) => Some(1),
            (6, -1) => Some(2),
            (6, 1) => Some(0),
            (7 | 15 | 33, 0) => Some(if connections >= 3 { 2 } else { 1 }),
            (7 | 15 | 33, 1) => Some(1),
            (7 | 15 | 33, -1) => Some(2),
            (8 | 16 | 34, 0) => Some(2),
            (8 | 16 | 34, 1) => Some(1),
            _ => None,
        };
    }
    match (z, charge) {
        (6, -1) => Some(2),
        (6, 1) => Some(0),
        (7 | 15 | 33, 0) if connections == 3 => Some(2),
        (7 | 15 | 33, -1) => Some(2),
        (8 | 16 | 34, 0) if connections == 2 => Some(2),
        (5, 0) if connections == 3 => Some(0),
        _ => None,
    }
}
