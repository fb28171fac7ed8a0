//! Canonical and randomized SMILES writing.
//!
//! Atoms are ranked by iterative invariant refinement. Remaining ties are
//! broken by trying every member of the lowest tied class and keeping the
//! lexicographically smallest output, up to a leaf budget; past the budget
//! the member with the smallest original index is taken.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::aromatic::aromatize;
use super::molecule::{BondOrder, Molecule};
use super::rings::smallest_ring_per_atom;

const LEAF_BUDGET: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("CanonicalizationFailed: {0}")]
    CanonicalizationFailed(String),
}

/// Canonical SMILES for `mol`. Kekulé rings that pass the Huckel check are
/// written in aromatic form; stereo annotations and atom classes are dropped.
pub fn canonical_smiles(mol: &Molecule) -> Result<String, CanonError> {
    let mol = aromatize(mol);
    if mol.atom_count() == 0 {
        return Ok(String::new());
    }
    let ranks = refine(&mol, initial_ranks(&mol));
    let mut best: Option<String> = None;
    let mut leaves = 0usize;
    search(&mol, ranks, &mut best, &mut leaves)?;
    best.ok_or_else(|| CanonError::CanonicalizationFailed("no complete ranking".into()))
}

/// A valid SMILES for `mol` whose traversal start and branch order are
/// driven by `seed`.
pub fn render_randomized(mol: &Molecule, seed: u64) -> String {
    let mut order: Vec<usize> = (0..mol.atom_count()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let mut ranks = vec![0usize; order.len()];
    for (r, &a) in order.iter().enumerate() {
        ranks[a] = r;
    }
    write(mol, &ranks).unwrap_or_default()
}

/// SMILES following the stored atom order. Used by `Display`.
pub(crate) fn write_in_input_order(mol: &Molecule) -> String {
    let ranks: Vec<usize> = (0..mol.atom_count()).collect();
    write(mol, &ranks).unwrap_or_default()
}

fn search(
    mol: &Molecule,
    ranks: Vec<usize>,
    best: &mut Option<String>,
    leaves: &mut usize,
) -> Result<(), CanonError> {
    let Some(class) = lowest_tied_class(&ranks) else {
        *leaves += 1;
        let s = write(mol, &ranks)?;
        if best.as_ref().is_none_or(|b| s < *b) {
            *best = Some(s);
        }
        return Ok(());
    };
    for (i, &member) in class.iter().enumerate() {
        if i > 0 && *leaves >= LEAF_BUDGET {
            break;
        }
        let split: Vec<(usize, u8)> = ranks
            .iter()
            .enumerate()
            .map(|(a, &r)| (r, u8::from(a != member)))
            .collect();
        let next = refine(mol, dense_rank(&split));
        search(mol, next, best, leaves)?;
    }
    Ok(())
}

/// Atoms of the tied class with the lowest rank, in original index order.
fn lowest_tied_class(ranks: &[usize]) -> Option<Vec<usize>> {
    let mut counts = vec![0usize; ranks.len()];
    for &r in ranks {
        counts[r] += 1;
    }
    let r = (0..ranks.len()).find(|&r| counts[r] > 1)?;
    Some((0..ranks.len()).filter(|&a| ranks[a] == r).collect())
}

fn initial_ranks(mol: &Molecule) -> Vec<usize> {
    let ring_size = smallest_ring_per_atom(mol);
    let keys: Vec<_> = mol
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let ring_bonds = mol
                .neighbors(i)
                .iter()
                .filter(|(_, b)| mol.bonds()[*b].in_ring)
                .count();
            (
                mol.degree(i),
                a.element.atomic_number(),
                a.isotope.unwrap_or(0),
                a.formal_charge,
                a.aromatic,
                a.hydrogen_count(),
                ring_size[i],
                ring_bonds,
            )
        })
        .collect();
    dense_rank(&keys)
}

/// Rank of each key = number of keys strictly smaller.
fn dense_rank<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..keys.len()).collect();
    idx.sort_by(|a, b| keys[*a].cmp(&keys[*b]));
    let mut ranks = vec![0usize; keys.len()];
    for (pos, &i) in idx.iter().enumerate() {
        ranks[i] = if pos > 0 && keys[idx[pos - 1]] == keys[i] {
            ranks[idx[pos - 1]]
        } else {
            pos
        };
    }
    ranks
}

fn class_count(ranks: &[usize]) -> usize {
    let mut seen = vec![false; ranks.len()];
    ranks
        .iter()
        .filter(|&&r| !std::mem::replace(&mut seen[r], true))
        .count()
}

fn refine(mol: &Molecule, mut ranks: Vec<usize>) -> Vec<usize> {
    let mut classes = class_count(&ranks);
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..mol.atom_count())
            .map(|a| {
                let mut env: Vec<(usize, u8)> = mol
                    .neighbors(a)
                    .iter()
                    .map(|&(n, b)| (ranks[n], mol.bonds()[b].order.code()))
                    .collect();
                env.sort_unstable();
                (ranks[a], env)
            })
            .collect();
        let next = dense_rank(&keys);
        let next_classes = class_count(&next);
        ranks = next;
        if next_classes == classes {
            return ranks;
        }
        classes = next_classes;
    }
}

#[derive(Default)]
struct Traversal {
    visited: Vec<bool>,
    bond_used: Vec<bool>,
    children: Vec<Vec<(usize, usize)>>,
    openings: Vec<Vec<usize>>,
    closings: Vec<Vec<usize>>,
}

impl Traversal {
    fn visit(&mut self, mol: &Molecule, ranks: &[usize], atom: usize, parent_bond: Option<usize>) {
        self.visited[atom] = true;
        let mut nbrs = mol.neighbors(atom).to_vec();
        nbrs.sort_by_key(|&(n, _)| ranks[n]);
        for (n, b) in nbrs {
            if Some(b) == parent_bond || self.bond_used[b] {
                continue;
            }
            self.bond_used[b] = true;
            if self.visited[n] {
                self.closings[atom].push(b);
                self.openings[n].push(b);
            } else {
                self.children[atom].push((n, b));
                self.visit(mol, ranks, n, Some(b));
            }
        }
    }
}

struct Writer<'a> {
    mol: &'a Molecule,
    t: Traversal,
    digit_of_bond: Vec<Option<usize>>,
    digit_free: Vec<bool>,
    out: String,
}

impl Writer<'_> {
    fn atom(&mut self, atom: usize) -> Result<(), CanonError> {
        self.out.push_str(&atom_text(self.mol, atom));
        for b in std::mem::take(&mut self.t.closings[atom]) {
            let d = self.digit_of_bond[b].expect("ring bond opened before closing");
            push_digit(&mut self.out, d);
            self.digit_free[d] = true;
        }
        for b in std::mem::take(&mut self.t.openings[atom]) {
            let d = (1..self.digit_free.len())
                .find(|&d| self.digit_free[d])
                .ok_or_else(|| {
                    CanonError::CanonicalizationFailed("more than 99 open rings".into())
                })?;
            self.digit_free[d] = false;
            self.digit_of_bond[b] = Some(d);
            self.out.push_str(bond_text(self.mol, b));
            push_digit(&mut self.out, d);
        }
        let children = std::mem::take(&mut self.t.children[atom]);
        let last = children.len().saturating_sub(1);
        for (i, (n, b)) in children.into_iter().enumerate() {
            if i < last {
                self.out.push('(');
            }
            self.out.push_str(bond_text(self.mol, b));
            self.atom(n)?;
            if i < last {
                self.out.push(')');
            }
        }
        Ok(())
    }
}

/// Writes `mol` with a depth-first traversal ordered by `ranks`: each
/// component starts at its lowest-ranked atom and branches are taken in
/// rank order.
fn write(mol: &Molecule, ranks: &[usize]) -> Result<String, CanonError> {
    let n = mol.atom_count();
    let mut t = Traversal {
        visited: vec![false; n],
        bond_used: vec![false; mol.bond_count()],
        children: vec![Vec::new(); n],
        openings: vec![Vec::new(); n],
        closings: vec![Vec::new(); n],
    };
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&a| ranks[a]);
    let mut roots = Vec::new();
    for a in starts {
        if !t.visited[a] {
            roots.push(a);
            t.visit(mol, ranks, a, None);
        }
    }
    let mut w = Writer {
        mol,
        t,
        digit_of_bond: vec![None; mol.bond_count()],
        digit_free: vec![true; 100],
        out: String::new(),
    };
    for (i, root) in roots.into_iter().enumerate() {
        if i > 0 {
            w.out.push('.');
        }
        w.atom(root)?;
    }
    Ok(w.out)
}

fn push_digit(out: &mut String, d: usize) {
    if d < 10 {
        out.push(char::from(b'0' + d as u8));
    } else {
        out.push('%');
        out.push_str(&d.to_string());
    }
}

fn bond_text(mol: &Molecule, bond: usize) -> &'static str {
    let b = &mol.bonds()[bond];
    let both_aromatic = mol.atom(b.begin).aromatic && mol.atom(b.end).aromatic;
    match b.order {
        BondOrder::Single if both_aromatic => "-",
        BondOrder::Single => "",
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Quadruple => "$",
        BondOrder::Aromatic if both_aromatic => "",
        BondOrder::Aromatic => ":",
    }
}

fn atom_text(mol: &Molecule, atom: usize) -> String {
    let a = mol.atom(atom);
    let symbol = if a.aromatic {
        a.element.symbol().to_ascii_lowercase()
    } else {
        a.element.symbol().to_string()
    };
    let bare = a.element.is_organic_subset()
        && a.formal_charge == 0
        && a.isotope.is_none()
        && a.hydrogen_count() == mol.implicit_hydrogens(atom);
    if bare {
        return symbol;
    }
    let mut s = String::from("[");
    if let Some(iso) = a.isotope {
        s.push_str(&iso.to_string());
    }
    s.push_str(&symbol);
    match a.hydrogen_count() {
        0 => {}
        1 => s.push('H'),
        h => {
            s.push('H');
            s.push_str(&h.to_string());
        }
    }
    match a.formal_charge {
        0 => {}
        1 => s.push('+'),
        -1 => s.push('-'),
        c if c > 0 => s.push_str(&format!("+{c}")),
        c => s.push_str(&format!("-{}", -c)),
    }
    s.push(']');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    fn canon(s: &str) -> String {
        canonical_smiles(&parse_smiles(s).unwrap()).unwrap()
    }

    #[test]
    fn same_molecule_same_string() {
        assert_eq!(canon("OCC"), canon("CCO"));
        assert_eq!(canon("C1=CC=CC=C1"), canon("c1ccccc1"));
        assert_eq!(canon("C1=CC=CN1"), canon("c1cc[nH]c1"));
        assert_eq!(canon("CC(=O)O"), canon("OC(C)=O"));
    }

    #[test]
    fn different_molecules_differ() {
        assert_ne!(canon("CCO"), canon("COC"));
        assert_ne!(canon("C1CCCCC1"), canon("c1ccccc1"));
    }

    #[test]
    fn idempotent() {
        for s in [
            "CC(=O)CC",
            "c1ccc2ccccc2c1",
            "CN1C=NC2=C1C(=O)N(C(=O)N2C)C",
            "[NH4+]",
            "C[13CH3]",
        ] {
            let c = canon(s);
            assert_eq!(canon(&c), c, "{s}");
        }
    }

    #[test]
    fn brackets_written_when_needed() {
        assert_eq!(canon("[NH4+]"), "[NH4+]");
        assert_eq!(canon("[Na+].[Cl-]"), "[Na+].[Cl-]");
        assert_eq!(canon("C"), "C");
        assert_eq!(canon("[CH3]"), "[CH3]");
    }

    #[test]
    fn randomized_is_deterministic_and_reparses() {
        let m = parse_smiles("CC(=O)Oc1ccccc1C(=O)O").unwrap();
        assert_eq!(render_randomized(&m, 7), render_randomized(&m, 7));
        for seed in 0..20 {
            let r = render_randomized(&m, seed);
            let back = parse_smiles(&r).unwrap();
            assert_eq!(back.atom_count(), m.atom_count());
            assert_eq!(
                canonical_smiles(&back).unwrap(),
                canonical_smiles(&m).unwrap()
            );
        }
        assert_eq!(render_randomized(&parse_smiles("C").unwrap(), 3), "C");
    }

    #[test]
    fn display_follows_input_order() {
        let m = parse_smiles("C1CC1O").unwrap();
        assert_eq!(m.to_string(), "C1CC1O");
    }

    #[test]
    fn many_ring_digits() {
        let s = "C12C3C4C1C5C2C3C45";
        let c = canon(s);
        assert_eq!(canon(&c), c);
    }
}
