//! SMILES toolkit: parsing, validation, canonical form, rings, fingerprints
//! and structural descriptors.

mod aromatic;
mod canon;
mod descriptors;
mod element;
mod fingerprint;
mod logp;
mod molecule;
mod parse;
mod rings;
mod valence;

pub use aromatic::aromatize;
pub use canon::{canonical_smiles, render_randomized, CanonError};
pub use descriptors::{all_descriptors, compute_descriptor, DescriptorKind, UnknownDescriptor};
pub use element::{Element, GENERIC_VALENCE_CAP};
pub use fingerprint::{
    morgan_fingerprint, tanimoto, Fingerprint, FingerprintConfig, FingerprintError, DEFAULT_RADIUS,
    DEFAULT_WIDTH,
};
pub use logp::{
    atom_type, contribution_table, crippen_logp, ContributionTable, LogpError, LOGP_NOTE,
};
pub use molecule::{Atom, Bond, BondDirection, BondOrder, Chirality, Molecule};
pub use parse::{parse_smiles, SmilesError, SmilesErrorKind};
pub use rings::{perceive_rings, RingInfo};
pub use valence::{validate_valence, ValidityReport, Violation, ViolationKind};

/// Parses `text` and requires it to pass the valence check.
pub fn parse_valid(text: &str) -> Result<Molecule, InvalidMolecule> {
    let mol = parse_smiles(text)?;
    let report = validate_valence(&mol);
    if report.valid {
        Ok(mol)
    } else {
        Err(InvalidMolecule::Valence(report))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InvalidMolecule {
    #[error(transparent)]
    Parse(#[from] SmilesError),
    #[error("valence violation: {0}")]
    Valence(ValidityReport),
}
