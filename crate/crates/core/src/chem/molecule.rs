use std::fmt;

use super::element::Element;
use super::rings::{self, RingInfo};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Chirality {
    /// `@`
    CounterClockwise,
    /// `@@`
    Clockwise,
}

/// `/` or `\` on a single bond. Kept as an annotation only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Quadruple,
    Aromatic,
}

impl BondOrder {
    /// Integer contribution to an atom's valence. Aromatic bonds count as one;
    /// the extra pi electron is handled per atom.
    pub fn valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Quadruple => 4,
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Quadruple => 4,
            BondOrder::Aromatic => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub element: Element,
    pub aromatic: bool,
    pub formal_charge: i8,
    /// Hydrogen count written inside brackets; `None` for organic-subset atoms.
    pub explicit_h: Option<u8>,
    pub isotope: Option<u16>,
    pub chirality: Option<Chirality>,
    pub atom_class: Option<u32>,
    pub index: usize,
    pub(crate) hydrogens: u8,
}

impl Atom {
    pub fn new(element: Element) -> Atom {
        Atom {
            element,
            aromatic: false,
            formal_charge: 0,
            explicit_h: None,
            isotope: None,
            chirality: None,
            atom_class: None,
            index: 0,
            hydrogens: 0,
        }
    }

    /// Attached hydrogens not present as separate graph nodes (explicit or implicit).
    pub fn hydrogen_count(&self) -> u8 {
        self.hydrogens
    }

    pub fn is_bracket(&self) -> bool {
        self.explicit_h.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bond {
    pub begin: usize,
    pub end: usize,
    pub order: BondOrder,
    pub in_ring: bool,
    pub direction: Option<BondDirection>,
}

impl Bond {
    pub fn new(begin: usize, end: usize, order: BondOrder) -> Bond {
        Bond {
            begin,
            end,
            order,
            in_ring: false,
            direction: None,
        }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.begin, self.end)
    }

    pub fn other(&self, atom: usize) -> usize {
        if self.begin == atom {
            self.end
        } else {
            self.begin
        }
    }
}

/// An attributed molecular graph. Immutable once built.
#[derive(Debug, Clone)]
pub struct Molecule {
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    source_smiles: String,
    adjacency: Vec<Vec<(usize, usize)>>,
    component: Vec<usize>,
    n_components: usize,
    rings: RingInfo,
}

impl Molecule {
    /// Builds a molecule, perceiving rings and deriving implicit hydrogens
    /// for atoms without a bracket hydrogen count.
    ///
    /// Callers guarantee endpoints are distinct, in range, and unique per pair.
    pub(crate) fn assemble(
        atoms: Vec<Atom>,
        bonds: Vec<Bond>,
        source_smiles: String,
        derive_hydrogens: bool,
    ) -> Molecule {
        let mut atoms = atoms;
        for (i, a) in atoms.iter_mut().enumerate() {
            a.index = i;
        }
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (bi, b) in bonds.iter().enumerate() {
            debug_assert_ne!(b.begin, b.end);
            adjacency[b.begin].push((b.end, bi));
            adjacency[b.end].push((b.begin, bi));
        }
        let (component, n_components) = components(atoms.len(), &adjacency);
        let rings = rings::perceive(atoms.len(), &bonds, &adjacency, n_components);
        let mut bonds = bonds;
        for b in bonds.iter_mut() {
            b.in_ring = false;
        }
        for &bi in &rings.ring_bonds {
            bonds[bi].in_ring = true;
        }
        let mut mol = Molecule {
            atoms,
            bonds,
            source_smiles,
            adjacency,
            component,
            n_components,
            rings,
        };
        if derive_hydrogens {
            for i in 0..mol.atoms.len() {
                let h = match mol.atoms[i].explicit_h {
                    Some(h) => h,
                    None => mol.implicit_hydrogens(i),
                };
                mol.atoms[i].hydrogens = h;
            }
        }
        mol
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn source_smiles(&self) -> &str {
        &self.source_smiles
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn bond_count(&self) -> usize {
        self.bonds.len()
    }

    /// `(neighbor, bond index)` pairs.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn heavy_degree(&self, atom: usize) -> usize {
        self.adjacency[atom]
            .iter()
            .filter(|(n, _)| !self.atoms[*n].element.is_hydrogen())
            .count()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<&Bond> {
        self.adjacency[a]
            .iter()
            .find(|(n, _)| *n == b)
            .map(|(_, bi)| &self.bonds[*bi])
    }

    pub fn component_count(&self) -> usize {
        self.n_components
    }

    /// Component id of each atom, numbered by first appearance.
    pub fn component_of(&self, atom: usize) -> usize {
        self.component[atom]
    }

    pub fn ring_info(&self) -> &RingInfo {
        &self.rings
    }

    /// Total valence used by the atom: bond orders, attached hydrogens and
    /// the pi contribution of aromatic atoms.
    pub fn used_valence(&self, atom: usize) -> u8 {
        self.bond_valence(atom) + self.atoms[atom].hydrogens
    }

    fn bond_valence(&self, atom: usize) -> u8 {
        self.bond_valence_with(atom, self.atoms[atom].hydrogens)
    }

    /// Extra valence unit for an aromatic atom that donates one electron to
    /// its ring (pyridine-type N, aromatic C without an exocyclic double bond).
    fn pi_contribution(&self, atom: usize, hydrogens: u8) -> u8 {
        let a = &self.atoms[atom];
        if !a.aromatic {
            return 0;
        }
        let aromatic_bonds = self.adjacency[atom]
            .iter()
            .filter(|(_, bi)| self.bonds[*bi].order == BondOrder::Aromatic)
            .count();
        if aromatic_bonds < 2 {
            return 0;
        }
        let exocyclic_multiple = self.adjacency[atom]
            .iter()
            .any(|(_, bi)| self.bonds[*bi].order.valence() >= 2);
        if exocyclic_multiple {
            return 0;
        }
        let connections = self.degree(atom) + hydrogens as usize;
        match a.element.atomic_number() {
            5 | 6 => u8::from(a.formal_charge == 0),
            7 | 15 | 33 => {
                u8::from(a.formal_charge == 1 || (a.formal_charge == 0 && connections == 2))
            }
            8 | 16 | 34 => u8::from(a.formal_charge == 1),
            _ => 0,
        }
    }

    /// Hydrogens an unbracketed atom would carry when read from SMILES.
    pub(crate) fn implicit_hydrogens(&self, atom: usize) -> u8 {
        let a = &self.atoms[atom];
        if !a.element.is_organic_subset() || a.formal_charge != 0 || a.isotope.is_some() {
            return 0;
        }
        let Some(valences) = a.element.valences(0) else {
            return 0;
        };
        let used = self.bond_valence_with(atom, 0);
        // Aromatic atoms and halogens only take the default valence.
        if a.aromatic || matches!(a.element.atomic_number(), 9 | 17 | 35 | 53) {
            return valences[0].saturating_sub(used);
        }
        valences
            .iter()
            .find(|&&v| v >= used)
            .map(|v| v - used)
            .unwrap_or(0)
    }

    fn bond_valence_with(&self, atom: usize, hydrogens: u8) -> u8 {
        let sum: u8 = self.adjacency[atom]
            .iter()
            .map(|(_, bi)| self.bonds[*bi].order.valence())
            .sum();
        sum + self.pi_contribution(atom, hydrogens)
    }

    /// Molecular formula in Hill order, counting attached hydrogens.
    pub fn formula(&self) -> String {
        let mut counts = std::collections::BTreeMap::<&str, usize>::new();
        let mut c = 0usize;
        let mut h = 0usize;
        for a in &self.atoms {
            h += a.hydrogens as usize;
            match a.element {
                Element::C => c += 1,
                Element::H => h += 1,
                e => *counts.entry(e.symbol()).or_default() += 1,
            }
        }
        let mut out = String::new();
        let mut push = |sym: &str, n: usize| {
            if n > 0 {
                out.push_str(sym);
                if n > 1 {
                    out.push_str(&n.to_string());
                }
            }
        };
        if c > 0 {
            push("C", c);
            push("H", h);
            for (s, n) in counts {
                push(s, n);
            }
        } else {
            counts.insert("H", h);
            for (s, n) in counts {
                push(s, n);
            }
        }
        out
    }
}

impl fmt::Display for Molecule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::canon::write_in_input_order(self))
    }
}

fn components(n: usize, adjacency: &[Vec<(usize, usize)>]) -> (Vec<usize>, usize) {
    let mut comp = vec![usize::MAX; n];
    let mut next = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        comp[start] = next;
        stack.push(start);
        while let Some(a) = stack.pop() {
            for &(b, _) in &adjacency[a] {
                if comp[b] == usize::MAX {
                    comp[b] = next;
                    stack.push(b);
                }
            }
        }
        next += 1;
    }
    (comp, next)
}
