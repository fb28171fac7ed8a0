//! Element symbols and the valence table used for implicit hydrogens and
//! validity checks.

use std::fmt;

const SYMBOLS: [&str; 118] = [
    "H", "He", "Li", "Be", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl",
    "Ar", "K", "Ca", "Sc", "Ti", "V", "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As",
    "Se", "Br", "Kr", "Rb", "Sr", "Y", "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd", "In",
    "Sn", "Sb", "Te", "I", "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd", "Pm", "Sm", "Eu", "Gd", "Tb",
    "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W", "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl",
    "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U", "Np", "Pu", "Am", "Cm", "Bk",
    "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh",
    "Fl", "Mc", "Lv", "Ts", "Og",
];

/// Maximum bond-order sum accepted for elements outside the valence table.
pub const GENERIC_VALENCE_CAP: u8 = 8;

/// A chemical element, stored as its atomic number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(u8);

impl Element {
    pub const H: Element = Element(1);
    pub const B: Element = Element(5);
    pub const C: Element = Element(6);
    pub const N: Element = Element(7);
    pub const O: Element = Element(8);
    pub const F: Element = Element(9);
    pub const P: Element = Element(15);
    pub const S: Element = Element(16);
    pub const CL: Element = Element(17);
    pub const SE: Element = Element(34);
    pub const BR: Element = Element(35);
    pub const I: Element = Element(53);

    pub fn from_atomic_number(z: u8) -> Option<Element> {
        (1..=118).contains(&z).then_some(Element(z))
    }

    pub fn from_symbol(symbol: &str) -> Option<Element> {
        SYMBOLS
            .iter()
            .position(|s| *s == symbol)
            .map(|i| Element(i as u8 + 1))
    }

    pub fn atomic_number(self) -> u8 {
        self.0
    }

    pub fn symbol(self) -> &'static str {
        SYMBOLS[self.0 as usize - 1]
    }

    /// Elements that may be written without brackets.
    pub fn is_organic_subset(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 9 | 15 | 16 | 17 | 35 | 53)
    }

    /// Elements that may be written in lowercase (aromatic) form.
    pub fn can_be_aromatic(self) -> bool {
        matches!(self.0, 5 | 6 | 7 | 8 | 15 | 16 | 33 | 34)
    }

    pub fn is_hydrogen(self) -> bool {
        self.0 == 1
    }

    /// Allowed valences for this element carrying `charge`, lowest first.
    ///
    /// `None` means the element/charge pair is outside the table; such atoms
    /// are only checked against [`GENERIC_VALENCE_CAP`].
    pub fn valences(self, charge: i8) -> Option<&'static [u8]> {
        let v: &'static [u8] = match (self.0, charge) {
            (1, 0) => &[1],
            (1, 1) | (1, -1) => &[0],
            (5, 0) => &[3],
            (5, -1) => &[4],
            (5, 1) => &[2],
            (6, 0) => &[4],
            (6, 1) | (6, -1) => &[3],
            (7, 0) => &[3],
            (7, 1) => &[4],
            (7, -1) => &[2],
            (7, -2) => &[1],
            (8, 0) => &[2],
            (8, 1) => &[3],
            (8, -1) => &[1],
            (8, -2) => &[0],
            (9, 0) => &[1],
            (9, -1) => &[0],
            (9, 1) => &[2],
            (14, 0) => &[4],
            (15, 0) | (33, 0) => &[3, 5],
            (15, 1) | (33, 1) => &[4],
            (15, -1) | (33, -1) => &[2],
            (16, 0) | (34, 0) | (52, 0) => &[2, 4, 6],
            (16, 1) | (34, 1) => &[3, 5],
            (16, -1) | (34, -1) => &[1, 3, 5],
            (17, 0) | (35, 0) | (53, 0) => &[1, 3, 5, 7],
            (17, -1) | (35, -1) | (53, -1) => &[0],
            (17, 1) | (35, 1) | (53, 1) => &[2],
            _ => return None,
        };
        Some(v)
    }

    /// Largest bond-order sum (including hydrogens) accepted for this
    /// element/charge pair.
    pub fn max_valence(self, charge: i8) -> u8 {
        self.valences(charge)
            .and_then(|v| v.last().copied())
            .unwrap_or(GENERIC_VALENCE_CAP)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
