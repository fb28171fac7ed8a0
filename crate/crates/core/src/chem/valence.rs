use std::fmt;

use serde::Serialize;

use super::molecule::Molecule;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    ValenceExceeded {
        used: u8,
        allowed: u8,
    },
    /// Lowercase atom that is not part of any ring.
    AromaticOutsideRing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub atom: usize,
    pub kind: ViolationKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ViolationKind::ValenceExceeded { used, allowed } => {
                write!(f, "ValenceExceeded(atom {}: {used} > {allowed})", self.atom)
            }
            ViolationKind::AromaticOutsideRing => {
                write!(f, "AromaticOutsideRing(atom {})", self.atom)
            }
        }
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.valid {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every atom's used valence against the element/charge table.
///
/// Organic-subset atoms use the table in [`super::Element::valences`]; any
/// other element/charge combination is only checked for overflow of
/// [`super::element::GENERIC_VALENCE_CAP`].
pub fn validate_valence(mol: &Molecule) -> ValidityReport {
    let mut violations = Vec::new();
    for (i, atom) in mol.atoms().iter().enumerate() {
        let used = mol.used_valence(i);
        let allowed = atom.element.max_valence(atom.formal_charge);
        if used > allowed {
            violations.push(Violation {
                atom: i,
                kind: ViolationKind::ValenceExceeded { used, allowed },
            });
        }
        if atom.aromatic
            && !mol
                .neighbors(i)
                .iter()
                .any(|(_, b)| mol.bonds()[*b].in_ring)
        {
            violations.push(Violation {
                atom: i,
                kind: ViolationKind::AromaticOutsideRing,
            });
        }
    }
    ValidityReport {
        valid: violations.is_empty(),
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem::parse_smiles;

    fn report(s: &str) -> ValidityReport {
        validate_valence(&parse_smiles(s).unwrap())
    }

    #[test]
    fn methane_is_valid() {
        let m = parse_smiles("C").unwrap();
        assert!(validate_valence(&m).valid);
        assert_eq!(m.atom(0).hydrogen_count(), 4);
    }

    #[test]
    fn pentavalent_carbon() {
        let r = report("C(C)(C)(C)(C)C");
        assert!(!r.valid);
        assert_eq!(r.violations[0].atom, 0);
        assert_eq!(
            r.violations[0].kind,
            ViolationKind::ValenceExceeded {
                used: 5,
                allowed: 4
            }
        );
    }

    #[test]
    fn valid_examples() {
        for s in [
            "O=C=O",
            "c1ccccc1",
            "c1cc[nH]c1",
            "c1ccncc1",
            "O=c1cccc[nH]1",
            "C[n+]1ccccc1",
            "CS(=O)(=O)C",
            "[NH4+]",
            "[O-]C=O",
            "FC(F)(F)Cl",
            "[Fe+2]",
            "c1ccc2ccccc2c1",
            "c1ccoc1",
            "c1ccsc1",
        ] {
            assert!(report(s).valid, "{s}: {:?}", report(s));
        }
    }

    #[test]
    fn invalid_examples() {
        assert!(!report("[CH5]").valid);
        assert!(!report("O=O=O").valid);
        assert!(!report("[NH4]").valid);
        assert!(!report("c").valid);
    }
}
