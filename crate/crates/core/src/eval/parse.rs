//! Answer parsing for free-text model outputs.

use std::collections::HashSet;
use std::sync::OnceLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::chem;

/// Affirmation keywords, matched as whole words in the leading sentence.
pub const YES_WORDS: &[&str] = &[
    "yes",
    "yeah",
    "yep",
    "true",
    "correct",
    "affirmative",
    "positive",
];

/// Negation keywords, matched as whole words in the leading sentence.
pub const NO_WORDS: &[&str] = &[
    "no",
    "not",
    "nope",
    "false",
    "incorrect",
    "negative",
    "never",
    "cannot",
    "can't",
    "doesn't",
    "don't",
    "isn't",
    "won't",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YesNo {
    Yes,
    No,
    Unknown,
}

impl YesNo {
    /// Score for ranking metrics: yes 1, no 0, unknown 0.5.
    pub fn score(self) -> f64 {
        match self {
            YesNo::Yes => 1.0,
            YesNo::No => 0.0,
            YesNo::Unknown => 0.5,
        }
    }
}

fn leading_sentence(text: &str) -> &str {
    let t = text.trim_start();
    match t.find(['.', '!', '?', '\n']) {
        Some(i) => &t[..i],
        None => t,
    }
}

/// Keyword match on the leading sentence, case-insensitive. Unknown when
/// neither list or both lists match.
pub fn parse_yesno(text: &str) -> YesNo {
    let sentence = leading_sentence(text).to_lowercase();
    let words: Vec<&str> = sentence
        .split(|c: char| !(c.is_alphanumeric() || c == '\''))
        .filter(|w| !w.is_empty())
        .collect();
    let yes = words.iter().any(|w| YES_WORDS.contains(w));
    let no = words.iter().any(|w| NO_WORDS.contains(w));
    match (yes, no) {
        (true, false) => YesNo::Yes,
        (false, true) => YesNo::No,
        _ => YesNo::Unknown,
    }
}

fn number_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"[-+]?(?:\d+(?:\.\d+)?|\.\d+)(?:[eE][-+]?\d+)?").expect("static regex")
    })
}

/// Numeric literals as `(start, end, value)`. Digits glued to a preceding
/// letter (as in "LogD7.4" or "H2O") are not literals.
fn literals(text: &str) -> Vec<(usize, usize, f64)> {
    number_re()
        .find_iter(text)
        .filter(|m| {
            let before = text[..m.start()].chars().next_back();
            !matches!(before, Some(c) if c.is_alphanumeric() || c == '.' || c == '_')
        })
        .filter_map(|m| m.as_str().parse().ok().map(|v| (m.start(), m.end(), v)))
        .collect()
}

/// The numeric literal nearest to an occurrence of `property`
/// (case-insensitive); the first literal when the name does not occur.
pub fn parse_numeric(text: &str, property: &str) -> Option<f64> {
    let lits = literals(text);
    if lits.is_empty() {
        return None;
    }
    let lower = text.to_lowercase();
    let needle = property.to_lowercase();
    let mut names = Vec::new();
    if !needle.is_empty() && lower.len() == text.len() {
        let mut from = 0;
        while let Some(i) = lower[from..].find(&needle) {
            names.push((from + i, from + i + needle.len()));
            from += i + needle.len().max(1);
        }
    }
    if names.is_empty() {
        return Some(lits[0].2);
    }
    let mut best: Option<(usize, bool, usize, f64)> = None;
    for &(s, e, v) in &lits {
        for &(ns, ne) in &names {
            if s < ne && ns < e {
                continue;
            }
            let (dist, before) = if s >= ne {
                (s - ne, false)
            } else {
                (ns - e, true)
            };
            let key = (dist, before, s, v);
            if best.is_none_or(|b| (key.0, key.1, key.2) < (b.0, b.1, b.2)) {
                best = Some(key);
            }
        }
    }
    best.map(|b| b.3).or(Some(lits[0].2))
}

const TRIM: &[char] = &['.', ',', ';', ':', '!', '?', '"', '\'', '`'];

/// Tokens that parse and pass the valence check, in order of appearance,
/// deduplicated by canonical form. The pronoun "I" is not treated as a
/// molecule.
pub fn extract_smiles(text: &str) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for token in text.split_whitespace() {
        let trimmed = token.trim_matches(TRIM);
        let mut candidates = vec![token, trimmed];
        if let Some(inner) = trimmed.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            candidates.push(inner);
        }
        for c in candidates {
            if c.is_empty() || c == "I" {
                continue;
            }
            if let Ok(m) = chem::parse_valid(c) {
                let key = chem::canonical_smiles(&m).unwrap_or_else(|_| c.to_string());
                if seen.insert(key) {
                    out.push(c.to_string());
                }
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn yesno() {
        assert_eq!(
            parse_yesno("Yes, the drug interacts with the target."),
            YesNo::Yes
        );
        assert_eq!(parse_yesno("No."), YesNo::No);
        assert_eq!(parse_yesno("It depends on dosage."), YesNo::Unknown);
        assert_eq!(parse_yesno("NO, it does not."), YesNo::No);
        assert_eq!(parse_yesno("Yes and no."), YesNo::Unknown);
        assert_eq!(parse_yesno("Unclear. Yes later."), YesNo::Unknown);
    }

    #[test]
    fn numeric() {
        let card = "It has a toxicity of 12, an activity of 1.2, a Logp of 3.1, and it is highly volatile.";
        assert_eq!(parse_numeric(card, "Logp"), Some(3.1));
        assert_eq!(parse_numeric(card, "toxicity"), Some(12.0));
        assert_eq!(parse_numeric(card, "solubility"), Some(12.0));
        assert_eq!(parse_numeric("cannot determine", "x"), None);
        assert_eq!(parse_numeric("The LogD7.4 is -0.5.", "LogD7.4"), Some(-0.5));
        assert_eq!(parse_numeric("value 1e3", "v"), Some(1000.0));
    }

    #[test]
    fn smiles_tokens() {
        assert_eq!(
            extract_smiles("The molecule is CC(=O)CC ."),
            vec!["CC(=O)CC"]
        );
        assert_eq!(
            extract_smiles("The molecule is CC(=O)CC."),
            vec!["CC(=O)CC"]
        );
        assert!(extract_smiles("I think nothing here").is_empty());
        assert_eq!(extract_smiles("CCO CCO OCC"), vec!["CCO"]);
        assert_eq!(extract_smiles("try (c1ccccc1)"), vec!["c1ccccc1"]);
    }
}
