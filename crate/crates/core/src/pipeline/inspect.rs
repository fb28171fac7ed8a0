//! One-line answers about single molecules.

use crate::chem::{self, FingerprintConfig};

/// Canonical SMILES.
pub fn canon_line(smiles: &str) -> Result<String, chem::InvalidMolecule> {
    let mol = chem::parse_valid(smiles)?;
    Ok(chem::canonical_smiles(&mol).expect("validated molecule renders"))
}

/// `name=value` pairs for every structural descriptor, then the approximate
/// LogP when the molecule has contributions for all atoms.
pub fn descriptors_line(smiles: &str) -> Result<String, chem::InvalidMolecule> {
    let mol = chem::parse_valid(smiles)?;
    let mut parts: Vec<String> = chem::all_descriptors(&mol)
        .into_iter()
        .map(|(k, v)| format!("{}={v}", k.name()))
        .collect();
    match chem::crippen_logp(&mol) {
        Ok(v) => parts.push(format!("LogP~{v:.3}")),
        Err(_) => parts.push("LogP~n/a".into()),
    }
    Ok(parts.join("\t"))
}

/// Popcount with the fingerprint parameters.
pub fn fp_line(smiles: &str, cfg: &FingerprintConfig) -> Result<String, String> {
    let mol = chem::parse_valid(smiles).map_err(|e| e.to_string())?;
    let fp = chem::morgan_fingerprint(&mol, cfg.radius, cfg.width).map_err(|e| e.to_string())?;
    Ok(format!(
        "popcount={}\twidth={}\tradius={}",
        fp.popcount(),
        fp.width(),
        fp.radius()
    ))
}
