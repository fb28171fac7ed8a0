//! Ring perception: smallest set of smallest rings via Horton candidate
//! cycles and GF(2) elimination.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::molecule::{Bond, Molecule};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RingInfo {
    /// Each ring as atom indices in cycle order.
    pub rings: Vec<Vec<usize>>,
    pub n_ring: usize,
    /// Size of the largest ring in `rings`, 0 if acyclic.
    pub max_ring: usize,
    pub(crate) ring_bonds: BTreeSet<usize>,
}

impl RingInfo {
    pub fn is_ring_bond(&self, bond: usize) -> bool {
        self.ring_bonds.contains(&bond)
    }
}

/// Ring information for an already-built molecule.
pub fn perceive_rings(mol: &Molecule) -> RingInfo {
    mol.ring_info().clone()
}

pub(crate) fn perceive(
    n_atoms: usize,
    bonds: &[Bond],
    adjacency: &[Vec<(usize, usize)>],
    n_components: usize,
) -> RingInfo {
    let rank = (bonds.len() + n_components).saturating_sub(n_atoms);
    if rank == 0 {
        return RingInfo::default();
    }
    let words = bonds.len().div_ceil(64);
    let mut seen = HashSet::new();
    let mut candidates: Vec<(Vec<usize>, Vec<u64>)> = Vec::new();

    let mut dist = vec![usize::MAX; n_atoms];
    let mut parent = vec![(usize::MAX, usize::MAX); n_atoms];
    let mut queue = VecDeque::new();
    for root in 0..n_atoms {
        if adjacency[root].len() < 2 {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        parent
            .iter_mut()
            .for_each(|p| *p = (usize::MAX, usize::MAX));
        dist[root] = 0;
        queue.push_back(root);
        while let Some(a) = queue.pop_front() {
            for &(b, bi) in &adjacency[a] {
                if dist[b] == usize::MAX {
                    dist[b] = dist[a] + 1;
                    parent[b] = (a, bi);
                    queue.push_back(b);
                }
            }
        }
        for (bi, bond) in bonds.iter().enumerate() {
            let (x, y) = (bond.begin, bond.end);
            if dist[x] == usize::MAX || parent[x].1 == bi || parent[y].1 == bi {
                continue;
            }
            let px = tree_path(root, x, &parent);
            let py = tree_path(root, y, &parent);
            let vx: HashSet<usize> = px.iter().map(|(a, _)| *a).collect();
            if py.iter().skip(1).any(|(a, _)| vx.contains(a)) {
                continue;
            }
            let mut bits = vec![0u64; words];
            for &(_, e) in px.iter().chain(py.iter()) {
                if e != usize::MAX {
                    bits[e / 64] |= 1 << (e % 64);
                }
            }
            bits[bi / 64] |= 1 << (bi % 64);
            if !seen.insert(bits.clone()) {
                continue;
            }
            let mut cycle: Vec<usize> = px.iter().map(|(a, _)| *a).collect();
            cycle.extend(py.iter().skip(1).rev().map(|(a, _)| *a));
            candidates.push((cycle, bits));
        }
    }

    candidates.sort_by(|a, b| {
        a.0.len().cmp(&b.0.len()).then_with(|| {
            let mut sa = a.0.clone();
            let mut sb = b.0.clone();
            sa.sort_unstable();
            sb.sort_unstable();
            sa.cmp(&sb)
        })
    });

    let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
    let mut rings = Vec::new();
    let mut ring_bonds = BTreeSet::new();
    for (cycle, bits) in candidates {
        if rings.len() == rank {
            break;
        }
        let mut reduced = bits.clone();
        for (pivot, row) in &basis {
            if reduced[pivot / 64] >> (pivot % 64) & 1 == 1 {
                for (r, w) in reduced.iter_mut().zip(row) {
                    *r ^= w;
                }
            }
        }
        let Some(pivot) = lowest_bit(&reduced) else {
            continue;
        };
        basis.push((pivot, reduced));
        for (wi, w) in bits.iter().enumerate() {
            let mut w = *w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                ring_bonds.insert(wi * 64 + b);
                w &= w - 1;
            }
        }
        rings.push(canonical_cycle(cycle));
    }
    let max_ring = rings.iter().map(Vec::len).max().unwrap_or(0);
    RingInfo {
        n_ring: rings.len(),
        rings,
        max_ring,
        ring_bonds,
    }
}

/// Path from `root` to `to` as `(atom, bond used to reach it)`; the root has no bond.
fn tree_path(root: usize, to: usize, parent: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut path = Vec::new();
    let mut cur = to;
    while cur != root {
        path.push((cur, parent[cur].1));
        cur = parent[cur].0;
    }
    path.push((root, usize::MAX));
    path.reverse();
    path
}

fn lowest_bit(bits: &[u64]) -> Option<usize> {
    bits.iter()
        .enumerate()
        .find(|(_, w)| **w != 0)
        .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

/// Rotates a cycle to start at its smallest atom, walking toward the smaller neighbor.
fn canonical_cycle(mut cycle: Vec<usize>) -> Vec<usize> {
    let n = cycle.len();
    let start = (0..n).min_by_key(|&i| cycle[i]).unwrap_or(0);
    cycle.rotate_left(start);
    if n > 2 && cycle[n - 1] < cycle[1] {
        cycle[1..].reverse();
    }
    cycle
}

/// Size of the smallest ring through each atom (0 for acyclic atoms).
pub(crate) fn smallest_ring_per_atom(mol: &Molecule) -> Vec<usize> {
    let n = mol.atom_count();
    let mut best = vec![0usize; n];
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for (bi, bond) in mol.bonds().iter().enumerate() {
        if !bond.in_ring {
            continue;
        }
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[bond.begin] = 0;
        queue.clear();
        queue.push_back(bond.begin);
        'bfs: while let Some(a) = queue.pop_front() {
            for &(b, e) in mol.neighbors(a) {
                if e == bi || dist[b] != usize::MAX {
                    continue;
                }
                dist[b] = dist[a] + 1;
                if b == bond.end {
                    break 'bfs;
                }
                queue.push_back(b);
            }
        }
        let size = dist[bond.end] + 1;
        for atom in [bond.begin, bond.end] {
            if best[atom] == 0 || size < best[atom] {
                best[atom] = size;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use crate::chem::parse_smiles;

    fn info(s: &str) -> (usize, usize) {
        let m = parse_smiles(s).unwrap();
        (m.ring_info().n_ring, m.ring_info().max_ring)
    }

    #[test]
    fn acyclic() {
        assert_eq!(info("CCO"), (0, 0));
    }

    #[test]
    fn benzene_and_naphthalene() {
        assert_eq!(info("c1ccccc1"), (1, 6));
        assert_eq!(info("c1ccc2ccccc2c1"), (2, 6));
    }

    #[test]
    fn bridged_and_spiro() {
        // norbornane: rank 2, rings of 5
        assert_eq!(info("C1CC2CCC1C2"), (2, 5));
        // spiro[4.5]decane
        assert_eq!(info("C1CCC2(C1)CCCCC2"), (2, 6));
        // cubane: rank 5, all 4-rings
        assert_eq!(info("C12C3C4C1C5C2C3C45"), (5, 4));
    }

    #[test]
    fn ring_bonds_flagged() {
        let m = parse_smiles("c1ccccc1CC").unwrap();
        let flags: Vec<bool> = m.bonds().iter().map(|b| b.in_ring).collect();
        assert_eq!(flags.iter().filter(|f| **f).count(), 6);
        assert!(!flags[flags.len() - 1]);
    }

    #[test]
    fn smallest_ring_sizes() {
        let m = parse_smiles("C1CC1CC1CCC1").unwrap();
        let s = super::smallest_ring_per_atom(&m);
        assert_eq!(s, vec![3, 3, 3, 0, 4, 4, 4, 4]);
    }
}
