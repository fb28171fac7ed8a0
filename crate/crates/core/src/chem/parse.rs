//! SMILES reader.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::element::Element;
use super::molecule::{Atom, Bond, BondDirection, BondOrder, Chirality, Molecule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SmilesErrorKind {
    EmptyInput,
    UnclosedRing(u16),
    UnbalancedParenthesis,
    UnknownElement(String),
    MalformedBracketAtom(String),
    UnexpectedCharacter(char),
    /// A bond symbol with no atom on one side.
    DanglingBond,
    /// Ring-closure digits on both ends specify different bond orders.
    RingBondConflict(u16),
    DuplicateBond,
    SelfBond,
}

impl fmt::Display for SmilesErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SmilesErrorKind::EmptyInput => write!(f, "EmptyInput"),
            SmilesErrorKind::UnclosedRing(d) => write!(f, "UnclosedRing({d})"),
            SmilesErrorKind::UnbalancedParenthesis => write!(f, "UnbalancedParenthesis"),
            SmilesErrorKind::UnknownElement(s) => write!(f, "UnknownElement({s})"),
            SmilesErrorKind::MalformedBracketAtom(s) => write!(f, "MalformedBracketAtom({s})"),
            SmilesErrorKind::UnexpectedCharacter(c) => write!(f, "UnexpectedCharacter({c:?})"),
            SmilesErrorKind::DanglingBond => write!(f, "DanglingBond"),
            SmilesErrorKind::RingBondConflict(d) => write!(f, "RingBondConflict({d})"),
            SmilesErrorKind::DuplicateBond => write!(f, "DuplicateBond"),
            SmilesErrorKind::SelfBond => write!(f, "SelfBond"),
        }
    }
}

/// A SMILES syntax error at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {offset}")]
pub struct SmilesError {
    pub offset: usize,
    pub kind: SmilesErrorKind,
}

impl SmilesError {
    fn new(offset: usize, kind: SmilesErrorKind) -> Self {
        SmilesError { offset, kind }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct BondSpec {
    order: BondOrder,
    direction: Option<BondDirection>,
}

struct RingOpen {
    atom: usize,
    bond: Option<BondSpec>,
    offset: usize,
}

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    branches: Vec<(Option<usize>, usize)>,
    rings: BTreeMap<u16, RingOpen>,
    prev: Option<usize>,
    pending: Option<(BondSpec, usize)>,
    /// Set right after `(` so that `()` can be rejected.
    branch_opened_at: Option<usize>,
}

/// Parses a SMILES string into a [`Molecule`].
pub fn parse_smiles(text: &str) -> Result<Molecule, SmilesError> {
    if text.trim().is_empty() {
        return Err(SmilesError::new(0, SmilesErrorKind::EmptyInput));
    }
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        branches: Vec::new(),
        rings: BTreeMap::new(),
        prev: None,
        pending: None,
        branch_opened_at: None,
    };
    p.run()?;

    // First pass only establishes ring membership; aromatic bonds outside
    // rings are demoted to single before hydrogens are derived.
    let draft = Molecule::assemble(p.atoms.clone(), p.bonds.clone(), String::new(), false);
    let mut bonds = p.bonds;
    for (bi, b) in bonds.iter_mut().enumerate() {
        if b.order == BondOrder::Aromatic && !draft.bonds()[bi].in_ring {
            b.order = BondOrder::Single;
        }
    }
    Ok(Molecule::assemble(p.atoms, bonds, text.to_string(), true))
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<(), SmilesError> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'(' => {
                    let Some(prev) = self.prev else {
                        return Err(SmilesError::new(
                            start,
                            SmilesErrorKind::UnexpectedCharacter('('),
                        ));
                    };
                    if self.pending.is_some() {
                        return Err(SmilesError::new(start, SmilesErrorKind::DanglingBond));
                    }
                    self.branches.push((Some(prev), start));
                    self.branch_opened_at = Some(start);
                    self.pos += 1;
                    continue;
                }
                b')' => {
                    if self.branch_opened_at.is_some() {
                        return Err(SmilesError::new(
                            start,
                            SmilesErrorKind::UnexpectedCharacter(')'),
                        ));
                    }
                    if self.pending.is_some() {
                        return Err(SmilesError::new(start, SmilesErrorKind::DanglingBond));
                    }
                    let Some((prev, _)) = self.branches.pop() else {
                        return Err(SmilesError::new(
                            start,
                            SmilesErrorKind::UnbalancedParenthesis,
                        ));
                    };
                    self.prev = prev;
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b'$' | b':' | b'/' | b'\\' => {
                    if self.pending.is_some() || self.prev.is_none() {
                        return Err(SmilesError::new(start, SmilesErrorKind::DanglingBond));
                    }
                    let spec = match c {
                        b'-' => BondSpec {
                            order: BondOrder::Single,
                            direction: None,
                        },
                        b'=' => BondSpec {
                            order: BondOrder::Double,
                            direction: None,
                        },
                        b'#' => BondSpec {
                            order: BondOrder::Triple,
                            direction: None,
                        },
                        b'$' => BondSpec {
                            order: BondOrder::Quadruple,
                            direction: None,
                        },
                        b':' => BondSpec {
                            order: BondOrder::Aromatic,
                            direction: None,
                        },
                        b'/' => BondSpec {
                            order: BondOrder::Single,
                            direction: Some(BondDirection::Up),
                        },
                        _ => BondSpec {
                            order: BondOrder::Single,
                            direction: Some(BondDirection::Down),
                        },
                    };
                    self.pending = Some((spec, start));
                    self.pos += 1;
                }
                b'.' => {
                    if self.pending.is_some() || self.prev.is_none() {
                        return Err(SmilesError::new(
                            start,
                            SmilesErrorKind::UnexpectedCharacter('.'),
                        ));
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                b'0'..=b'9' | b'%' => self.ring_closure()?,
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.add_atom(atom, start)?;
                }
                _ => {
                    let atom = self.organic_atom()?;
                    self.add_atom(atom, start)?;
                }
            }
            self.branch_opened_at = None;
        }
        if let Some((_, offset)) = self.branches.first() {
            return Err(SmilesError::new(
                *offset,
                SmilesErrorKind::UnbalancedParenthesis,
            ));
        }
        if self.prev.is_none() && self.input.last() == Some(&b'.') {
            return Err(SmilesError::new(
                self.input.len() - 1,
                SmilesErrorKind::UnexpectedCharacter('.'),
            ));
        }
        if let Some((_, offset)) = self.pending {
            return Err(SmilesError::new(offset, SmilesErrorKind::DanglingBond));
        }
        if let Some((digit, open)) = self.rings.iter().min_by_key(|(_, r)| r.offset) {
            return Err(SmilesError::new(
                open.offset,
                SmilesErrorKind::UnclosedRing(*digit),
            ));
        }
        Ok(())
    }

    fn add_atom(&mut self, atom: Atom, offset: usize) -> Result<(), SmilesError> {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        if let Some(prev) = self.prev {
            let spec = self.pending.take().map(|(s, _)| s);
            self.add_bond(prev, idx, spec, offset)?;
        } else if let Some((_, at)) = self.pending {
            return Err(SmilesError::new(at, SmilesErrorKind::DanglingBond));
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn add_bond(
        &mut self,
        a: usize,
        b: usize,
        spec: Option<BondSpec>,
        offset: usize,
    ) -> Result<(), SmilesError> {
        if a == b {
            return Err(SmilesError::new(offset, SmilesErrorKind::SelfBond));
        }
        if self
            .bonds
            .iter()
            .any(|x| (x.begin == a && x.end == b) || (x.begin == b && x.end == a))
        {
            return Err(SmilesError::new(offset, SmilesErrorKind::DuplicateBond));
        }
        let both_aromatic = self.atoms[a].aromatic && self.atoms[b].aromatic;
        let (order, direction) = match spec {
            Some(s) => (s.order, s.direction),
            None if both_aromatic => (BondOrder::Aromatic, None),
            None => (BondOrder::Single, None),
        };
        let mut bond = Bond::new(a, b, order);
        bond.direction = direction;
        self.bonds.push(bond);
        Ok(())
    }

    fn ring_closure(&mut self) -> Result<(), SmilesError> {
        let start = self.pos;
        let digit: u16 = if self.input[self.pos] == b'%' {
            let d = self.input.get(self.pos + 1..self.pos + 3);
            match d {
                Some(d) if d.iter().all(u8::is_ascii_digit) => {
                    self.pos += 3;
                    ((d[0] - b'0') * 10 + (d[1] - b'0')) as u16
                }
                _ => {
                    return Err(SmilesError::new(
                        start,
                        SmilesErrorKind::UnexpectedCharacter('%'),
                    ))
                }
            }
        } else {
            self.pos += 1;
            (self.input[start] - b'0') as u16
        };
        let Some(prev) = self.prev else {
            return Err(SmilesError::new(
                start,
                SmilesErrorKind::UnexpectedCharacter(self.input[start] as char),
            ));
        };
        let here = self.pending.take().map(|(s, _)| s);
        match self.rings.remove(&digit) {
            None => {
                self.rings.insert(
                    digit,
                    RingOpen {
                        atom: prev,
                        bond: here,
                        offset: start,
                    },
                );
            }
            Some(open) => {
                let spec = match (open.bond, here) {
                    (Some(x), Some(y)) if x.order != y.order => {
                        return Err(SmilesError::new(
                            start,
                            SmilesErrorKind::RingBondConflict(digit),
                        ));
                    }
                    (Some(x), _) => Some(x),
                    (None, y) => y,
                };
                self.add_bond(open.atom, prev, spec, start)?;
            }
        }
        Ok(())
    }

    fn organic_atom(&mut self) -> Result<Atom, SmilesError> {
        let start = self.pos;
        let c = self.input[self.pos];
        let next = self.input.get(self.pos + 1).copied();
        let (symbol, aromatic, len) = match (c, next) {
            (b'C', Some(b'l')) => ("Cl", false, 2),
            (b'B', Some(b'r')) => ("Br", false, 2),
            (b'B' | b'C' | b'N' | b'O' | b'P' | b'S' | b'F' | b'I', _) => (
                std::str::from_utf8(&self.input[start..start + 1]).unwrap(),
                false,
                1,
            ),
            (b'b', _) => ("B", true, 1),
            (b'c', _) => ("C", true, 1),
            (b'n', _) => ("N", true, 1),
            (b'o', _) => ("O", true, 1),
            (b'p', _) => ("P", true, 1),
            (b's', _) => ("S", true, 1),
            (c, _) if c.is_ascii_alphabetic() => {
                let end = match next {
                    Some(n) if n.is_ascii_lowercase() => start + 2,
                    _ => start + 1,
                };
                let sym = String::from_utf8_lossy(&self.input[start..end]).into_owned();
                return Err(SmilesError::new(
                    start,
                    SmilesErrorKind::UnknownElement(sym),
                ));
            }
            (c, _) => {
                let ch = std::str::from_utf8(&self.input[start..])
                    .ok()
                    .and_then(|s| s.chars().next())
                    .unwrap_or(c as char);
                return Err(SmilesError::new(
                    start,
                    SmilesErrorKind::UnexpectedCharacter(ch),
                ));
            }
        };
        self.pos += len;
        let mut atom = Atom::new(Element::from_symbol(symbol).expect("organic subset symbol"));
        atom.aromatic = aromatic;
        Ok(atom)
    }

    fn bracket_atom(&mut self) -> Result<Atom, SmilesError> {
        let start = self.pos;
        let close = self.input[start..]
            .iter()
            .position(|&b| b == b']')
            .map(|p| start + p)
            .ok_or_else(|| {
                SmilesError::new(
                    start,
                    SmilesErrorKind::MalformedBracketAtom("missing ']'".into()),
                )
            })?;
        let body = &self.input[start + 1..close];
        let text = String::from_utf8_lossy(body).into_owned();
        let malformed = |why: &str| {
            SmilesError::new(
                start,
                SmilesErrorKind::MalformedBracketAtom(format!("[{text}]: {why}")),
            )
        };
        let mut i = 0;

        let digits = body.iter().take_while(|b| b.is_ascii_digit()).count();
        let isotope = if digits > 0 {
            let v: u16 = text[..digits]
                .parse()
                .map_err(|_| malformed("isotope out of range"))?;
            i = digits;
            Some(v)
        } else {
            None
        };

        let rest = &body[i..];
        let (element, aromatic, len) = match rest {
            [b's', b'e', ..] => (Element::SE, true, 2),
            [b'a', b's', ..] => (Element::from_symbol("As").unwrap(), true, 2),
            [c @ (b'b' | b'c' | b'n' | b'o' | b'p' | b's'), ..] => {
                let sym = (*c as char).to_ascii_uppercase().to_string();
                (Element::from_symbol(&sym).unwrap(), true, 1)
            }
            [u, l, ..] if u.is_ascii_uppercase() && l.is_ascii_lowercase() => {
                let two = std::str::from_utf8(&rest[..2]).unwrap();
                match Element::from_symbol(two) {
                    Some(e) => (e, false, 2),
                    None => {
                        let one = std::str::from_utf8(&rest[..1]).unwrap();
                        match Element::from_symbol(one) {
                            Some(e) => (e, false, 1),
                            None => {
                                return Err(SmilesError::new(
                                    start + 1 + i,
                                    SmilesErrorKind::UnknownElement(two.to_string()),
                                ))
                            }
                        }
                    }
                }
            }
            [u, ..] if u.is_ascii_uppercase() => {
                let one = std::str::from_utf8(&rest[..1]).unwrap();
                match Element::from_symbol(one) {
                    Some(e) => (e, false, 1),
                    None => {
                        return Err(SmilesError::new(
                            start + 1 + i,
                            SmilesErrorKind::UnknownElement(one.to_string()),
                        ))
                    }
                }
            }
            [] => return Err(malformed("missing element symbol")),
            _ => {
                let sym: String = rest.iter().take(2).map(|b| *b as char).collect();
                return Err(SmilesError::new(
                    start + 1 + i,
                    SmilesErrorKind::UnknownElement(sym),
                ));
            }
        };
        i += len;

        let mut chirality = None;
        if body.get(i) == Some(&b'@') {
            if body.get(i + 1) == Some(&b'@') {
                chirality = Some(Chirality::Clockwise);
                i += 2;
            } else {
                chirality = Some(Chirality::CounterClockwise);
                i += 1;
            }
            if body
                .get(i)
                .is_some_and(|b| b.is_ascii_uppercase() && *b != b'H')
            {
                return Err(malformed("extended chirality classes are not supported"));
            }
        }

        let mut h = 0u8;
        if body.get(i) == Some(&b'H') {
            i += 1;
            h = 1;
            let n = body[i..].iter().take_while(|b| b.is_ascii_digit()).count();
            if n > 0 {
                h = text[i..i + n]
                    .parse()
                    .map_err(|_| malformed("hydrogen count out of range"))?;
                i += n;
            }
        }

        let mut charge: i32 = 0;
        if let Some(&sign @ (b'+' | b'-')) = body.get(i) {
            let s = if sign == b'+' { 1 } else { -1 };
            i += 1;
            let n = body[i..].iter().take_while(|b| b.is_ascii_digit()).count();
            if n > 0 {
                let v: i32 = text[i..i + n]
                    .parse()
                    .map_err(|_| malformed("charge out of range"))?;
                charge = s * v;
                i += n;
            } else {
                charge = s;
                while body.get(i) == Some(&sign) {
                    charge += s;
                    i += 1;
                }
            }
        }
        if !(-4..=4).contains(&charge) {
            return Err(malformed("formal charge outside [-4, +4]"));
        }

        let mut class = None;
        if body.get(i) == Some(&b':') {
            i += 1;
            let n = body[i..].iter().take_while(|b| b.is_ascii_digit()).count();
            if n == 0 {
                return Err(malformed("empty atom class"));
            }
            class = Some(
                text[i..i + n]
                    .parse()
                    .map_err(|_| malformed("atom class out of range"))?,
            );
            i += n;
        }

        if i != body.len() {
            return Err(malformed("unexpected trailing characters"));
        }
        if aromatic && !element.can_be_aromatic() {
            return Err(malformed("element cannot be aromatic"));
        }

        self.pos = close + 1;
        let mut atom = Atom::new(element);
        atom.aromatic = aromatic;
        atom.isotope = isotope;
        atom.chirality = chirality;
        atom.explicit_h = Some(h);
        atom.formal_charge = charge as i8;
        atom.atom_class = class;
        Ok(atom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(s: &str) -> SmilesError {
        parse_smiles(s).unwrap_err()
    }

    #[test]
    fn butanone() {
        let m = parse_smiles("CC(=O)CC").unwrap();
        let carbons = m.atoms().iter().filter(|a| a.element == Element::C).count();
        let oxygens = m.atoms().iter().filter(|a| a.element == Element::O).count();
        assert_eq!((carbons, oxygens), (4, 1));
        let doubles = m
            .bonds()
            .iter()
            .filter(|b| b.order == BondOrder::Double)
            .count();
        assert_eq!(doubles, 1);
        assert_eq!(m.ring_info().n_ring, 0);
        assert_eq!(m.atom(1).hydrogen_count(), 0);
        assert_eq!(m.atom(0).hydrogen_count(), 3);
    }

    #[test]
    fn benzene() {
        let m = parse_smiles("c1ccccc1").unwrap();
        assert_eq!(m.atom_count(), 6);
        assert!(m
            .atoms()
            .iter()
            .all(|a| a.aromatic && a.hydrogen_count() == 1));
        assert_eq!(m.bonds().len(), 6);
        assert!(m.bonds().iter().all(|b| b.order == BondOrder::Aromatic));
        assert_eq!(m.ring_info().n_ring, 1);
    }

    #[test]
    fn error_kinds_and_offsets() {
        assert_eq!(err("").kind, SmilesErrorKind::EmptyInput);
        assert_eq!(
            err("C1CC"),
            SmilesError::new(1, SmilesErrorKind::UnclosedRing(1))
        );
        assert_eq!(err("CC(C").kind, SmilesErrorKind::UnbalancedParenthesis);
        assert_eq!(err("CC(C").offset, 2);
        assert_eq!(err("CC)C").kind, SmilesErrorKind::UnbalancedParenthesis);
        assert_eq!(
            err("CXC"),
            SmilesError::new(1, SmilesErrorKind::UnknownElement("X".into()))
        );
        assert_eq!(
            err("[Xx]").kind,
            SmilesErrorKind::UnknownElement("Xx".into())
        );
        assert!(matches!(
            err("[C+9]").kind,
            SmilesErrorKind::MalformedBracketAtom(_)
        ));
        assert!(matches!(
            err("[CH").kind,
            SmilesErrorKind::MalformedBracketAtom(_)
        ));
        assert_eq!(err("C=").kind, SmilesErrorKind::DanglingBond);
        assert_eq!(err("C11").kind, SmilesErrorKind::SelfBond);
        assert_eq!(err("C12CC12").kind, SmilesErrorKind::DuplicateBond);
        assert_eq!(err("C=1CC-1").kind, SmilesErrorKind::RingBondConflict(1));
        assert_eq!(err("C()C").kind, SmilesErrorKind::UnexpectedCharacter(')'));
    }

    #[test]
    fn error_display_names_the_kind() {
        assert_eq!(err("C1CC").to_string(), "UnclosedRing(1) at byte 1");
    }

    #[test]
    fn bracket_atoms() {
        let m = parse_smiles("[NH4+]").unwrap();
        assert_eq!(m.atom(0).formal_charge, 1);
        assert_eq!(m.atom(0).hydrogen_count(), 4);
        let m = parse_smiles("[13CH3:7][O--]").unwrap();
        assert_eq!(m.atom(0).isotope, Some(13));
        assert_eq!(m.atom(0).atom_class, Some(7));
        assert_eq!(m.atom(1).formal_charge, -2);
        let m = parse_smiles("N[C@@H](C)C(=O)O").unwrap();
        assert_eq!(m.atom(1).chirality, Some(Chirality::Clockwise));
        let m = parse_smiles("[Fe+2]").unwrap();
        assert_eq!(m.atom(0).formal_charge, 2);
        let m = parse_smiles("c1cc[se]c1").unwrap();
        assert!(m.atom(3).aromatic);
    }

    #[test]
    fn ring_closures_and_percent_digits() {
        let m = parse_smiles("C%10CC%10").unwrap();
        assert_eq!(m.ring_info().n_ring, 1);
        let m = parse_smiles("C=1CC1").unwrap();
        assert_eq!(m.bond_between(0, 2).unwrap().order, BondOrder::Double);
    }

    #[test]
    fn non_ring_aromatic_bond_is_single() {
        let m = parse_smiles("c1ccccc1c1ccccc1").unwrap();
        let link = m.bond_between(5, 6).unwrap();
        assert_eq!(link.order, BondOrder::Single);
        assert!(!link.in_ring);
    }

    #[test]
    fn implicit_hydrogens() {
        let m = parse_smiles("C").unwrap();
        assert_eq!(m.atom(0).hydrogen_count(), 4);
        let m = parse_smiles("c1ccncc1").unwrap();
        assert_eq!(m.atom(3).hydrogen_count(), 0);
        let m = parse_smiles("c1cc[nH]c1").unwrap();
        assert_eq!(m.atom(3).hydrogen_count(), 1);
        let m = parse_smiles("CS(=O)(=O)C").unwrap();
        assert_eq!(m.atom(1).hydrogen_count(), 0);
        let m = parse_smiles("c1ccc2ccccc2c1").unwrap();
        assert_eq!(m.atom(3).hydrogen_count(), 0);
        let m = parse_smiles("O=c1cccc[nH]1").unwrap();
        assert_eq!(m.atom(1).hydrogen_count(), 0);
    }

    #[test]
    fn dot_separated_components() {
        let m = parse_smiles("[Na+].[Cl-]").unwrap();
        assert_eq!(m.component_count(), 2);
        assert_eq!(m.bond_count(), 0);
        for bad in [".C", "C..C", "CC."] {
            let e = parse_smiles(bad).unwrap_err();
            assert_eq!(e.kind, SmilesErrorKind::UnexpectedCharacter('.'), "{bad}");
        }
    }

    #[test]
    fn stereo_bonds_are_annotations() {
        let m = parse_smiles("F/C=C/F").unwrap();
        assert_eq!(m.bonds()[0].direction, Some(BondDirection::Up));
        assert_eq!(m.bonds()[0].order, BondOrder::Single);
    }
}
