use serde::{Deserialize, Serialize};

use super::build::Document;
use super::dictionary::EntityDictionary;
use super::{CorpusError, CorpusRecord, Substitution};

/// Stand-off entity mention: a byte span of the document text.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub id: String,
}

/// Pre-annotated mentions for one document, as produced by an external
/// recognizer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationSet {
    pub doc_id: String,
    pub spans: Vec<Span>,
}

pub type Annotation = Span;

fn apply(doc: &Document, hits: &[(usize, usize, String, String, bool)]) -> CorpusRecord {
    let text = &doc.text;
    let mut out = String::with_capacity(text.len());
    let mut subs = Vec::with_capacity(hits.len());
    let mut cursor = 0;
    for (start, end, id, replacement, ambiguous) in hits {
        out.push_str(&text[cursor..*start]);
        let span_start = out.len();
        out.push_str(replacement);
        subs.push(Substitution {
            span: (span_start, out.len()),
            source: (*start, *end),
            surface: text[*start..*end].to_string(),
            id: id.clone(),
            replacement: replacement.clone(),
            ambiguous: *ambiguous,
        });
        cursor = *end;
    }
    out.push_str(&text[cursor..]);
    CorpusRecord {
        id: doc.id.clone(),
        text: out,
        topic: doc.topic.clone(),
        substitutions: subs,
    }
}

/// Replaces dictionary surface forms, longest match first, left to right,
/// on alphanumeric word boundaries. Text outside replaced spans is copied
/// unchanged.
pub fn normalize_entities(doc: &Document, dict: &EntityDictionary) -> CorpusRecord {
    let hits: Vec<_> = dict
        .find_all(&doc.text)
        .into_iter()
        .map(|(s, e, i)| {
            let entry = dict.entry(i);
            (
                s,
                e,
                entry.id.clone(),
                entry.replacement.clone(),
                dict.is_ambiguous(i),
            )
        })
        .collect();
    apply(doc, &hits)
}

/// Replaces pre-annotated spans using the dictionary entry for each id.
/// Spans must be in bounds, on character boundaries and non-overlapping.
pub fn normalize_annotated(
    doc: &Document,
    spans: &[Span],
    dict: &EntityDictionary,
) -> Result<CorpusRecord, CorpusError> {
    let bad = |reason: String| CorpusError::InvalidAnnotation {
        doc_id: doc.id.clone(),
        reason,
    };
    let mut sorted: Vec<&Span> = spans.iter().collect();
    sorted.sort_by_key(|s| (s.start, s.end));
    let mut hits = Vec::with_capacity(sorted.len());
    let mut last_end = 0;
    for s in sorted {
        if s.start >= s.end || s.end > doc.text.len() {
            return Err(bad(format!("span {}..{} out of bounds", s.start, s.end)));
        }
        if !doc.text.is_char_boundary(s.start) || !doc.text.is_char_boundary(s.end) {
            return Err(bad(format!(
                "span {}..{} splits a character",
                s.start, s.end
            )));
        }
        if s.start < last_end {
            return Err(bad(format!(
                "span {}..{} overlaps the previous span",
                s.start, s.end
            )));
        }
        let entry = dict
            .by_id(&s.id)
            .ok_or_else(|| bad(format!("unknown id {:?}", s.id)))?;
        hits.push((
            s.start,
            s.end,
            entry.id.clone(),
            entry.replacement.clone(),
            false,
        ));
        last_end = s.end;
    }
    Ok(apply(doc, &hits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DictEntry, ReplacementKind};

    const ASPIRIN: &str = "CC(=O)Oc1ccccc1C(=O)O";

    fn dict() -> EntityDictionary {
        let e = |s: &str, id: &str, r: &str| DictEntry {
            surface: s.into(),
            id: id.into(),
            replacement: r.into(),
            kind: ReplacementKind::Smiles,
        };
        EntityDictionary::new(
            vec![
                e("aspirin", "DB00945", ASPIRIN),
                e("acetyl salicylic acid", "DB00945", ASPIRIN),
                e("salicylic acid", "DB00936", "OC(=O)c1ccccc1O"),
                e("Aspirin", "DB99999", "CCO"),
            ],
            true,
        )
        .unwrap()
    }

    fn doc(text: &str) -> Document {
        Document {
            id: "d".into(),
            text: text.into(),
            topic: "Chemistry".into(),
        }
    }

    #[test]
    fn substitutes_and_logs() {
        let r = normalize_entities(&doc("aspirin reduces fever"), &dict());
        assert_eq!(r.text, format!("{ASPIRIN} reduces fever"));
        assert_eq!(r.substitutions.len(), 1);
        let s = &r.substitutions[0];
        assert_eq!(&r.text[s.span.0..s.span.1], ASPIRIN);
        assert!(s.ambiguous);
        assert_eq!(s.id, "DB00945");
    }

    #[test]
    fn no_hits_and_longest_match() {
        let r = normalize_entities(&doc("nothing here"), &dict());
        assert_eq!(r.text, "nothing here");
        assert!(r.substitutions.is_empty());
        let r = normalize_entities(&doc("acetyl salicylic acid, then salicylic acid."), &dict());
        assert_eq!(r.substitutions[0].id, "DB00945");
        assert_eq!(r.substitutions[1].id, "DB00936");
        assert_eq!(
            normalize_entities(&doc(&r.text), &dict())
                .substitutions
                .len(),
            0
        );
    }

    #[test]
    fn stand_off_spans() {
        let d = doc("We gave aspirin.");
        let r = normalize_annotated(
            &d,
            &[Span {
                start: 8,
                end: 15,
                id: "DB00945".into(),
            }],
            &dict(),
        )
        .unwrap();
        assert_eq!(r.text, format!("We gave {ASPIRIN}."));
        let overlap = [
            Span {
                start: 0,
                end: 5,
                id: "DB00945".into(),
            },
            Span {
                start: 3,
                end: 6,
                id: "DB00945".into(),
            },
        ];
        assert!(normalize_annotated(&d, &overlap, &dict()).is_err());
        let unknown = [Span {
            start: 0,
            end: 2,
            id: "nope".into(),
        }];
        assert!(normalize_annotated(&d, &unknown, &dict()).is_err());
    }
}
