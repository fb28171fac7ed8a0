//! ECFP-style circular fingerprints and Tanimoto similarity.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::aromatic::aromatize;
use super::molecule::Molecule;

pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_WIDTH: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum FingerprintError {
    #[error("WidthMismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("InvalidWidth: {0} is not a power of two")]
    InvalidWidth(usize),
}

/// Fingerprint parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FingerprintConfig {
    pub radius: u32,
    pub width: usize,
}

impl Default for FingerprintConfig {
    fn default() -> Self {
        FingerprintConfig {
            radius: DEFAULT_RADIUS,
            width: DEFAULT_WIDTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    words: Vec<u64>,
    radius: u32,
    width: usize,
}

impl Fingerprint {
    /// An empty fingerprint. `width` must be a power of two.
    pub fn new(width: usize, radius: u32) -> Result<Fingerprint, FingerprintError> {
        if !width.is_power_of_two() {
            return Err(FingerprintError::InvalidWidth(width));
        }
        Ok(Fingerprint {
            words: vec![0; width.div_ceil(64)],
            radius,
            width,
        })
    }

    /// Builds a fingerprint with the given bits set. Bits are reduced modulo `width`.
    pub fn from_bits(
        width: usize,
        bits: impl IntoIterator<Item = usize>,
    ) -> Result<Fingerprint, FingerprintError> {
        let mut fp = Fingerprint::new(width, 0)?;
        for b in bits {
            fp.set(b & (width - 1));
        }
        Ok(fp)
    }

    pub fn set(&mut self, bit: usize) {
        self.words[bit / 64] |= 1 << (bit % 64);
    }

    pub fn get(&self, bit: usize) -> bool {
        bit < self.width && self.words[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn popcount(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    /// Indices of set bits, ascending.
    pub fn on_bits(&self) -> Vec<usize> {
        (0..self.width).filter(|&b| self.get(b)).collect()
    }
}

/// Morgan fingerprint with `radius` refinement rounds folded into `width` bits.
/// Kekulé and aromatic renderings of a ring give the same bits.
pub fn morgan_fingerprint(
    mol: &Molecule,
    radius: u32,
    width: usize,
) -> Result<Fingerprint, FingerprintError> {
    let mol = &aromatize(mol);
    let mut fp = Fingerprint::new(width, radius)?;
    let mask = width - 1;
    let mut ids: Vec<u64> = mol
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            hash_words(&[
                u64::from(a.element.atomic_number()),
                mol.heavy_degree(i) as u64,
                u64::from(a.hydrogen_count()),
                a.formal_charge as i64 as u64,
                u64::from(a.isotope.unwrap_or(0)),
                u64::from(
                    mol.neighbors(i)
                        .iter()
                        .any(|(_, b)| mol.bonds()[*b].in_ring),
                ),
                u64::from(a.aromatic),
            ])
        })
        .collect();
    for &id in &ids {
        fp.set(id as usize & mask);
    }
    for iteration in 1..=radius {
        let next: Vec<u64> = (0..mol.atom_count())
            .map(|a| {
                let mut env: Vec<(u64, u64)> = mol
                    .neighbors(a)
                    .iter()
                    .map(|&(n, b)| (u64::from(mol.bonds()[b].order.code()), ids[n]))
                    .collect();
                env.sort_unstable();
                let mut words = vec![u64::from(iteration), ids[a]];
                for (code, id) in env {
                    words.push(code);
                    words.push(id);
                }
                hash_words(&words)
            })
            .collect();
        for &id in &next {
            fp.set(id as usize & mask);
        }
        ids = next;
    }
    Ok(fp)
}

/// |a ∧ b| / |a ∨ b|; 1.0 when both are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.width != b.width {
        return Err(FingerprintError::WidthMismatch(a.width, b.width));
    }
    let (mut inter, mut union) = (0u32, 0u32);
    for (x, y) in a.words.iter().zip(&b.words) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    if union == 0 {
        return Ok(1.0);
    }
    Ok(f64::from(inter) / f64::from(union))
}

// FNV-1a over the little-endian bytes, finished with a splitmix64 round.
fn hash_words(words: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= u64::from(byte);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
    }
    h = h.wrapping_add(0x9e37_79b9_7f4a_7c15);
    h = (h ^ (h >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    h = (h ^ (h >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    h ^ (h >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    fn fp(s: &str, radius: u32) -> Fingerprint {
        morgan_fingerprint(&parse_smiles(s).unwrap(), radius, DEFAULT_WIDTH).unwrap()
    }

    #[test]
    fn isomorphism_invariant() {
        assert_eq!(fp("OCC", 2), fp("CCO", 2));
    }

    #[test]
    fn kekule_and_aromatic_agree() {
        assert_eq!(fp("C1=CC=CC=C1O", 2), fp("Oc1ccccc1", 2));
        assert_eq!(
            fp("CN1C=NC2=C1C(=O)N(C(=O)N2C)C", 2),
            fp("Cn1cnc2c1c(=O)n(C)c(=O)n2C", 2)
        );
    }

    #[test]
    fn atom_invariants_differ() {
        assert_ne!(fp("C", 0), fp("O", 0));
    }

    #[test]
    fn benzene_popcount() {
        let p = fp("c1ccccc1", 2).popcount();
        assert!(p > 0 && p <= 2048);
    }

    #[test]
    fn tanimoto_formula() {
        let a = Fingerprint::from_bits(64, [1, 2]).unwrap();
        let b = Fingerprint::from_bits(64, [2, 3]).unwrap();
        let c = Fingerprint::from_bits(64, [5]).unwrap();
        assert!((tanimoto(&a, &b).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(tanimoto(&a, &a).unwrap(), 1.0);
        assert_eq!(tanimoto(&a, &c).unwrap(), 0.0);
        let e = Fingerprint::new(64, 0).unwrap();
        assert_eq!(tanimoto(&e, &e).unwrap(), 1.0);
    }

    #[test]
    fn width_checks() {
        assert_eq!(
            Fingerprint::new(100, 2),
            Err(FingerprintError::InvalidWidth(100))
        );
        let a = Fingerprint::new(64, 0).unwrap();
        let b = Fingerprint::new(128, 0).unwrap();
        assert_eq!(
            tanimoto(&a, &b),
            Err(FingerprintError::WidthMismatch(64, 128))
        );
    }
}
