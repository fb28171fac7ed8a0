//! Structural descriptors: ring counts, rotatable and rigid bonds, donors,
//! heteroatoms and net charge.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::element::Element;
use super::molecule::{BondOrder, Molecule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DescriptorKind {
    #[serde(rename = "nRing")]
    NRing,
    #[serde(rename = "MaxRing")]
    MaxRing,
    #[serde(rename = "nRot")]
    NRot,
    #[serde(rename = "nRig")]
    NRig,
    #[serde(rename = "nHD")]
    NHD,
    #[serde(rename = "nHet")]
    NHet,
    #[serde(rename = "fChar")]
    FChar,
}

impl DescriptorKind {
    pub const ALL: [DescriptorKind; 7] = [
        DescriptorKind::NRing,
        DescriptorKind::MaxRing,
        DescriptorKind::NRot,
        DescriptorKind::NRig,
        DescriptorKind::NHD,
        DescriptorKind::NHet,
        DescriptorKind::FChar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DescriptorKind::NRing => "nRing",
            DescriptorKind::MaxRing => "MaxRing",
            DescriptorKind::NRot => "nRot",
            DescriptorKind::NRig => "nRig",
            DescriptorKind::NHD => "nHD",
            DescriptorKind::NHet => "nHet",
            DescriptorKind::FChar => "fChar",
        }
    }
}

impl fmt::Display for DescriptorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown descriptor {0:?}")]
pub struct UnknownDescriptor(pub String);

impl FromStr for DescriptorKind {
    type Err = UnknownDescriptor;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DescriptorKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownDescriptor(s.to_string()))
    }
}

pub fn compute_descriptor(mol: &Molecule, kind: DescriptorKind) -> i64 {
    match kind {
        DescriptorKind::NRing => mol.ring_info().n_ring as i64,
        DescriptorKind::MaxRing => mol.ring_info().max_ring as i64,
        DescriptorKind::NRot => rotatable_bonds(mol) as i64,
        DescriptorKind::NRig => heavy_bonds(mol) as i64 - rotatable_bonds(mol) as i64,
        DescriptorKind::NHD => mol
            .atoms()
            .iter()
            .enumerate()
            .filter(|(i, a)| matches!(a.element, Element::N | Element::O) && total_h(mol, *i) > 0)
            .count() as i64,
        DescriptorKind::NHet => mol
            .atoms()
            .iter()
            .filter(|a| !matches!(a.element, Element::C | Element::H))
            .count() as i64,
        DescriptorKind::FChar => mol.atoms().iter().map(|a| i64::from(a.formal_charge)).sum(),
    }
}

/// All descriptors in declaration order.
pub fn all_descriptors(mol: &Molecule) -> Vec<(DescriptorKind, i64)> {
    DescriptorKind::ALL
        .into_iter()
        .map(|k| (k, compute_descriptor(mol, k)))
        .collect()
}

fn total_h(mol: &Molecule, atom: usize) -> usize {
    let graph_h = mol
        .neighbors(atom)
        .iter()
        .filter(|(n, _)| mol.atom(*n).element.is_hydrogen())
        .count();
    mol.atom(atom).hydrogen_count() as usize + graph_h
}

fn heavy_bonds(mol: &Molecule) -> usize {
    mol.bonds()
        .iter()
        .filter(|b| {
            !mol.atom(b.begin).element.is_hydrogen() && !mol.atom(b.end).element.is_hydrogen()
        })
        .count()
}

fn rotatable_bonds(mol: &Molecule) -> usize {
    mol.bonds()
        .iter()
        .filter(|b| {
            b.order == BondOrder::Single
                && !b.in_ring
                && !mol.atom(b.begin).element.is_hydrogen()
                && !mol.atom(b.end).element.is_hydrogen()
                && mol.heavy_degree(b.begin) > 1
                && mol.heavy_degree(b.end) > 1
                && !is_amide(mol, b.begin, b.end)
        })
        .count()
}

/// C–N bond where the carbon carries a double-bonded oxygen.
fn is_amide(mol: &Molecule, a: usize, b: usize) -> bool {
    let carbonyl_c = |c: usize| {
        mol.atom(c).element == Element::C
            && mol.neighbors(c).iter().any(|&(n, bi)| {
                mol.atom(n).element == Element::O && mol.bonds()[bi].order == BondOrder::Double
            })
    };
    let (ea, eb) = (mol.atom(a).element, mol.atom(b).element);
    (ea == Element::N && carbonyl_c(b)) || (eb == Element::N && carbonyl_c(a))
}
