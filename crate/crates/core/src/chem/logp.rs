//! Approximate octanol/water logP as a sum of atom-type contributions.
//!
//! The contribution table ships as `assets/logp_contributions.tsv`. It is a
//! simplified Crippen-style scheme with hydrogens folded into heavy-atom
//! rows; results are approximate and labelled as such wherever reported.

use std::collections::HashMap;
use std::sync::OnceLock;

use thiserror::Error;

use super::element::Element;
use super::molecule::{BondOrder, Molecule};

const TABLE_TSV: &str = include_str!("../../assets/logp_contributions.tsv");

/// Label attached to every reported logP value.
pub const LOGP_NOTE: &str = "approximate (simplified Crippen-style contributions)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogpError {
    #[error("UnclassifiedAtomType: atom {atom} has type {atom_type} with no table row")]
    UnclassifiedAtomType { atom: usize, atom_type: String },
}

#[derive(Debug)]
pub struct ContributionTable {
    pub version: String,
    rows: HashMap<String, f64>,
}

impl ContributionTable {
    pub fn get(&self, atom_type: &str) -> Option<f64> {
        self.rows.get(atom_type).copied()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// The shipped contribution table.
pub fn contribution_table() -> &'static ContributionTable {
    static TABLE: OnceLock<ContributionTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut version = String::from("unversioned");
        let mut rows = HashMap::new();
        for line in TABLE_TSV.lines() {
            if let Some(rest) = line.strip_prefix("# version\t") {
                version = rest.trim().to_string();
                continue;
            }
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(t), Some(v)) = (cols.next(), cols.next()) else {
                panic!("malformed logP table row: {line}");
            };
            let v: f64 = v.parse().expect("numeric logP contribution");
            rows.insert(t.to_string(), v);
        }
        ContributionTable { version, rows }
    })
}

pub fn crippen_logp(mol: &Molecule) -> Result<f64, LogpError> {
    let table = contribution_table();
    let mut total = 0.0;
    for i in 0..mol.atom_count() {
        let t = atom_type(mol, i);
        match table.get(&t) {
            Some(v) => total += v,
            None => {
                return Err(LogpError::UnclassifiedAtomType {
                    atom: i,
                    atom_type: t,
                })
            }
        }
    }
    Ok(total)
}

/// Table key for an atom, e.g. `C.sp3.H3` or `N.ar.H0`.
pub fn atom_type(mol: &Molecule, atom: usize) -> String {
    let a = mol.atom(atom);
    let h = a.hydrogen_count();
    let mut doubles = 0;
    let mut triple = false;
    let mut double_to_hetero = false;
    for &(n, b) in mol.neighbors(atom) {
        match mol.bonds()[b].order {
            BondOrder::Double => {
                doubles += 1;
                if mol.atom(n).element != Element::C {
                    double_to_hetero = true;
                }
            }
            BondOrder::Triple | BondOrder::Quadruple => triple = true,
            _ => {}
        }
    }
    let hetero_neighbor = mol
        .neighbors(atom)
        .iter()
        .any(|(n, _)| !matches!(mol.atom(*n).element, Element::C | Element::H));
    let charge = a.formal_charge;
    match a.element {
        Element::H => "H".into(),
        Element::C if charge != 0 => "C.charged".into(),
        Element::C if a.aromatic && hetero_neighbor => format!("C.ar.X.H{h}"),
        Element::C if a.aromatic => format!("C.ar.H{h}"),
        Element::C if triple || doubles >= 2 => format!("C.sp.H{h}"),
        Element::C if double_to_hetero => format!("C.carbonyl.H{h}"),
        Element::C if doubles == 1 => format!("C.sp2.H{h}"),
        Element::C if hetero_neighbor => format!("C.sp3.X.H{h}"),
        Element::C => format!("C.sp3.H{h}"),
        Element::N if charge > 0 => "N.plus".into(),
        Element::N if charge < 0 => "N.minus".into(),
        Element::N if a.aromatic => format!("N.ar.H{h}"),
        Element::N if triple => format!("N.sp.H{h}"),
        Element::N if doubles > 0 => format!("N.sp2.H{h}"),
        Element::N => format!("N.sp3.H{h}"),
        Element::O if charge < 0 => "O.minus".into(),
        Element::O if charge > 0 => "O.plus".into(),
        Element::O if a.aromatic => "O.ar".into(),
        Element::O if doubles > 0 => "O.carbonyl".into(),
        Element::O => format!("O.sp3.H{h}"),
        Element::S if charge != 0 => "S.charged".into(),
        Element::S if a.aromatic => "S.ar".into(),
        Element::S if doubles > 0 || mol.degree(atom) > 2 => "S.oxidized".into(),
        Element::S => format!("S.sp3.H{h}"),
        e if charge != 0 => format!("{}.charged", e.symbol()),
        e => e.symbol().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    fn logp(s: &str) -> f64 {
        crippen_logp(&parse_smiles(s).unwrap()).unwrap()
    }

    #[test]
    fn table_loads() {
        let t = contribution_table();
        assert_eq!(t.version, "1");
        assert!(t.len() > 40);
    }

    #[test]
    fn methane_is_single_row() {
        assert_eq!(logp("C"), contribution_table().get("C.sp3.H4").unwrap());
    }

    #[test]
    fn longer_alkane_is_more_lipophilic() {
        assert!(logp("CCCCCC") > logp("CC"));
    }

    #[test]
    fn rendering_invariant() {
        assert_eq!(logp("OCC"), logp("CCO"));
    }

    #[test]
    fn unclassified_atom() {
        let m = parse_smiles("[CH3+]").unwrap();
        assert!(matches!(
            crippen_logp(&m),
            Err(LogpError::UnclassifiedAtomType { atom: 0, .. })
        ));
        let m = parse_smiles("[Fe]").unwrap();
        assert!(crippen_logp(&m).is_err());
    }
}
