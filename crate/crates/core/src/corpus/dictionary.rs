use std::collections::HashMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::CorpusError;
use crate::chem;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReplacementKind {
    /// A drug: the replacement is a SMILES string and must be valid.
    #[default]
    Smiles,
    /// A normalized name for a non-drug entity.
    Name,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictEntry {
    pub surface: String,
    pub id: String,
    pub replacement: String,
    pub kind: ReplacementKind,
}

#[derive(Debug, Default, Clone)]
struct Node {
    children: HashMap<char, usize>,
    entry: Option<usize>,
}

/// Surface forms indexed in a character trie. When several entries share a
/// surface form the first listed one is used.
#[derive(Debug, Clone)]
pub struct EntityDictionary {
    entries: Vec<DictEntry>,
    case_insensitive: bool,
    nodes: Vec<Node>,
    ambiguous: Vec<bool>,
    by_id: HashMap<String, usize>,
}

/// Per-character case folding that keeps a one-to-one char mapping.
pub(crate) fn fold(c: char, case_insensitive: bool) -> char {
    if !case_insensitive {
        return c;
    }
    let mut l = c.to_lowercase();
    match (l.next(), l.next()) {
        (Some(x), None) => x,
        _ => c,
    }
}

impl EntityDictionary {
    /// Builds and lints the dictionary. SMILES replacements must be valid and
    /// no replacement may contain a surface form, so normalizing twice is a
    /// no-op.
    pub fn new(
        entries: Vec<DictEntry>,
        case_insensitive: bool,
    ) -> Result<EntityDictionary, CorpusError> {
        let mut dict = EntityDictionary {
            entries: Vec::with_capacity(entries.len()),
            case_insensitive,
            nodes: vec![Node::default()],
            ambiguous: Vec::new(),
            by_id: HashMap::new(),
        };
        for (i, e) in entries.into_iter().enumerate() {
            let line = i + 1;
            if e.surface.trim().is_empty() {
                return Err(CorpusError::MalformedDictionaryRow {
                    line,
                    reason: "empty surface form".into(),
                });
            }
            if e.kind == ReplacementKind::Smiles {
                chem::parse_valid(&e.replacement).map_err(|err| {
                    CorpusError::InvalidReplacement {
                        line,
                        reason: format!("{:?}: {err}", e.replacement),
                    }
                })?;
            }
            dict.insert(e);
        }
        dict.lint()?;
        Ok(dict)
    }

    fn insert(&mut self, e: DictEntry) {
        let idx = self.entries.len();
        let mut node = 0;
        for c in e.surface.chars() {
            let c = fold(c, self.case_insensitive);
            node = match self.nodes[node].children.get(&c) {
                Some(&n) => n,
                None => {
                    self.nodes.push(Node::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[node].children.insert(c, n);
                    n
                }
            };
        }
        self.ambiguous.push(false);
        match self.nodes[node].entry {
            Some(first) => self.ambiguous[first] = true,
            None => self.nodes[node].entry = Some(idx),
        }
        self.by_id.entry(e.id.clone()).or_insert(idx);
        self.entries.push(e);
    }

    fn lint(&self) -> Result<(), CorpusError> {
        for e in &self.entries {
            if let Some((_, _, hit)) = self.find_all(&e.replacement).into_iter().next() {
                return Err(CorpusError::ReplacementContainsSurface {
                    id: e.id.clone(),
                    surface: self.entries[hit].surface.clone(),
                });
            }
        }
        Ok(())
    }

    /// Reads `surface \t id \t replacement [\t smiles|name]` rows. Blank
    /// lines and `#` comments are skipped.
    pub fn from_tsv<R: BufRead>(
        reader: R,
        case_insensitive: bool,
    ) -> Result<EntityDictionary, CorpusError> {
        let mut entries = Vec::new();
        let mut lines = Vec::new();
        for (i, l) in reader.lines().enumerate() {
            let l = l.map_err(|e| CorpusError::Io(e.to_string()))?;
            let line = i + 1;
            if l.trim().is_empty() || l.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = l.split('\t').collect();
            if !(3..=4).contains(&cols.len()) {
                return Err(CorpusError::MalformedDictionaryRow {
                    line,
                    reason: format!("expected 3 or 4 columns, found {}", cols.len()),
                });
            }
            let kind = match cols.get(3).map(|s| s.trim()) {
                None | Some("") | Some("smiles") => ReplacementKind::Smiles,
                Some("name") => ReplacementKind::Name,
                Some(other) => {
                    return Err(CorpusError::MalformedDictionaryRow {
                        line,
                        reason: format!("unknown replacement kind {other:?}"),
                    })
                }
            };
            if cols[1].trim().is_empty() || cols[2].trim().is_empty() {
                return Err(CorpusError::MalformedDictionaryRow {
                    line,
                    reason: "empty id or replacement".into(),
                });
            }
            entries.push(DictEntry {
                surface: cols[0].trim().to_string(),
                id: cols[1].trim().to_string(),
                replacement: cols[2].trim().to_string(),
                kind,
            });
            lines.push(line);
        }
        // Report errors against file lines rather than entry positions.
        EntityDictionary::new(entries, case_insensitive).map_err(|e| match e {
            CorpusError::MalformedDictionaryRow { line, reason } => {
                CorpusError::MalformedDictionaryRow {
                    line: lines[line - 1],
                    reason,
                }
            }
            CorpusError::InvalidReplacement { line, reason } => CorpusError::InvalidReplacement {
                line: lines[line - 1],
                reason,
            },
            other => other,
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[DictEntry] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &DictEntry {
        &self.entries[i]
    }

    pub fn is_ambiguous(&self, i: usize) -> bool {
        self.ambiguous[i]
    }

    /// First entry listed for an id.
    pub fn by_id(&self, id: &str) -> Option<&DictEntry> {
        self.by_id.get(id).map(|&i| &self.entries[i])
    }

    /// Longest-first, left-to-right, non-overlapping matches on word
    /// boundaries as `(start, end, entry)` byte spans.
    pub(crate) fn find_all(&self, text: &str) -> Vec<(usize, usize, usize)> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let boundary_before = |k: usize| k == 0 || !chars[k - 1].1.is_alphanumeric();
        let boundary_after = |k: usize| k >= chars.len() || !chars[k].1.is_alphanumeric();
        let mut out = Vec::new();
        let mut k = 0;
        while k < chars.len() {
            if !boundary_before(k) {
                k += 1;
                continue;
            }
            let mut node = 0;
            let mut best = None;
            let mut j = k;
            while j < chars.len() {
                match self.nodes[node]
                    .children
                    .get(&fold(chars[j].1, self.case_insensitive))
                {
                    Some(&n) => node = n,
                    None => break,
                }
                j += 1;
                if let Some(e) = self.nodes[node].entry {
                    if boundary_after(j) {
                        best = Some((j, e));
                    }
                }
            }
            match best {
                Some((end, e)) => {
                    let start_b = chars[k].0;
                    let end_b = if end < chars.len() {
                        chars[end].0
                    } else {
                        text.len()
                    };
                    out.push((start_b, end_b, e));
                    k = end;
                }
                None => k += 1,
            }
        }
        out
    }
}
