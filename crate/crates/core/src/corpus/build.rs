use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::BufRead;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dictionary::EntityDictionary;
use super::normalize::{normalize_annotated, normalize_entities, Span};
use super::{CorpusError, CorpusRecord};

fn default_topic() -> String {
    "unknown".into()
}

/// Input document as read from JSONL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub id: String,
    pub text: String,
    #[serde(default = "default_topic")]
    pub topic: String,
}

impl Document {
    pub fn parse_line(line: &str, lineno: usize) -> Result<Document, CorpusError> {
        let doc: Document =
            serde_json::from_str(line).map_err(|e| CorpusError::MalformedDocument {
                line: lineno,
                reason: e.to_string(),
            })?;
        if doc.id.trim().is_empty() {
            return Err(CorpusError::MalformedDocument {
                line: lineno,
                reason: "empty id".into(),
            });
        }
        Ok(doc)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub documents_in: usize,
    pub records_out: usize,
    pub duplicates: usize,
    pub malformed: usize,
    pub invalid_annotations: usize,
    pub substitutions: usize,
    pub ambiguous_substitutions: usize,
    pub topics: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopicShare {
    pub topic: String,
    pub count: usize,
    pub percent: f64,
}

impl CorpusStats {
    /// Topics by descending count with their share of emitted records.
    pub fn topic_table(&self) -> Vec<TopicShare> {
        let total = self.records_out.max(1) as f64;
        let mut rows: Vec<TopicShare> = self
            .topics
            .iter()
            .map(|(t, &c)| TopicShare {
                topic: t.clone(),
                count: c,
                percent: 100.0 * c as f64 / total,
            })
            .collect();
        rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.topic.cmp(&b.topic)));
        rows
    }

    pub fn reconciles(&self) -> bool {
        self.records_out + self.duplicates + self.malformed + self.invalid_annotations
            == self.documents_in
            && self.topics.values().sum::<usize>() == self.records_out
    }

    pub fn merge(&mut self, other: &CorpusStats) {
        self.documents_in += other.documents_in;
        self.records_out += other.records_out;
        self.duplicates += other.duplicates;
        self.malformed += other.malformed;
        self.invalid_annotations += other.invalid_annotations;
        self.substitutions += other.substitutions;
        self.ambiguous_substitutions += other.ambiguous_substitutions;
        for (k, v) in &other.topics {
            *self.topics.entry(k.clone()).or_default() += v;
        }
    }
}

/// Streaming corpus construction. Documents are normalized independently;
/// exact duplicates of the normalized text are dropped in input order.
pub struct CorpusBuilder<'d> {
    dict: &'d EntityDictionary,
    annotations: Option<&'d HashMap<String, Vec<Span>>>,
    seen: HashSet<[u8; 32]>,
    stats: CorpusStats,
}

impl<'d> CorpusBuilder<'d> {
    pub fn new(dict: &'d EntityDictionary) -> CorpusBuilder<'d> {
        CorpusBuilder {
            dict,
            annotations: None,
            seen: HashSet::new(),
            stats: CorpusStats::default(),
        }
    }

    /// Uses stand-off annotations, keyed by document id, instead of the
    /// dictionary matcher. Documents without annotations pass through
    /// unchanged.
    pub fn with_annotations(
        mut self,
        annotations: &'d HashMap<String, Vec<Span>>,
    ) -> CorpusBuilder<'d> {
        self.annotations = Some(annotations);
        self
    }

    fn normalize(&self, doc: &Document) -> Result<CorpusRecord, CorpusError> {
        match self.annotations {
            None => Ok(normalize_entities(doc, self.dict)),
            Some(map) => {
                normalize_annotated(doc, map.get(&doc.id).map_or(&[], Vec::as_slice), self.dict)
            }
        }
    }

    fn accept(&mut self, outcome: Result<CorpusRecord, CorpusError>) -> Option<CorpusRecord> {
        self.stats.documents_in += 1;
        let rec = match outcome {
            Ok(r) => r,
            Err(e) => {
                log::warn!("{e}");
                match e {
                    CorpusError::InvalidAnnotation { .. } => self.stats.invalid_annotations += 1,
                    _ => self.stats.malformed += 1,
                }
                return None;
            }
        };
        let digest: [u8; 32] = Sha256::digest(rec.text.as_bytes()).into();
        if !self.seen.insert(digest) {
            self.stats.duplicates += 1;
            return None;
        }
        self.stats.records_out += 1;
        self.stats.substitutions += rec.substitutions.len();
        self.stats.ambiguous_substitutions +=
            rec.substitutions.iter().filter(|s| s.ambiguous).count();
        *self.stats.topics.entry(rec.topic.clone()).or_default() += 1;
        Some(rec)
    }

    pub fn push(&mut self, doc: &Document) -> Option<CorpusRecord> {
        let outcome = self.normalize(doc);
        self.accept(outcome)
    }

    /// Parses and normalizes one JSONL line; malformed lines are counted.
    pub fn push_line(&mut self, line: &str, lineno: usize) -> Option<CorpusRecord> {
        let outcome = Document::parse_line(line, lineno).and_then(|d| self.normalize(&d));
        self.accept(outcome)
    }

    /// Normalizes a chunk of `(line number, line)` pairs in parallel, then
    /// deduplicates sequentially so output order equals input order.
    pub fn push_chunk(&mut self, lines: &[(usize, String)]) -> Vec<CorpusRecord> {
        let outcomes: Vec<_> = lines
            .par_iter()
            .map(|(n, l)| Document::parse_line(l, *n).and_then(|d| self.normalize(&d)))
            .collect();
        outcomes
            .into_iter()
            .filter_map(|o| self.accept(o))
            .collect()
    }

    pub fn stats(&self) -> &CorpusStats {
        &self.stats
    }

    pub fn finish(self) -> CorpusStats {
        self.stats
    }
}

/// Reads a JSONL document stream fully and returns the records with their
/// statistics. Blank lines are ignored.
pub fn build_corpus<R: BufRead>(
    docs: R,
    dict: &EntityDictionary,
) -> Result<(Vec<CorpusRecord>, CorpusStats), CorpusError> {
    let mut b = CorpusBuilder::new(dict);
    let mut out = Vec::new();
    for (i, line) in docs.lines().enumerate() {
        let line = line.map_err(|e| CorpusError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        out.extend(b.push_line(&line, i + 1));
    }
    Ok((out, b.finish()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{DictEntry, ReplacementKind};

    fn dict() -> EntityDictionary {
        EntityDictionary::new(
            vec![DictEntry {
                surface: "ethanol".into(),
                id: "E".into(),
                replacement: "CCO".into(),
                kind: ReplacementKind::Smiles,
            }],
            true,
        )
        .unwrap()
    }

    fn line(id: usize, text: &str, topic: &str) -> String {
        serde_json::json!({"id": format!("d{id}"), "text": text, "topic": topic}).to_string()
    }

    #[test]
    fn dedup_and_histogram() {
        let mut lines: Vec<String> = (0..8)
            .map(|i| {
                line(
                    i,
                    &format!("doc {i} ethanol"),
                    if i < 5 { "Chemistry" } else { "Medicine" },
                )
            })
            .collect();
        lines.push(line(8, "doc 0 ethanol", "Chemistry"));
        // Duplicate after normalization only.
        lines.push(line(9, "doc 1 CCO", "Chemistry"));
        let (recs, stats) = build_corpus(lines.join("\n").as_bytes(), &dict()).unwrap();
        assert_eq!(recs.len(), 8);
        assert_eq!(stats.duplicates, 2);
        assert!(stats.reconciles());
        assert_eq!(stats.topic_table()[0].topic, "Chemistry");
        assert!((stats.topic_table().iter().map(|t| t.percent).sum::<f64>() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn empty_and_malformed() {
        let (recs, stats) = build_corpus("".as_bytes(), &dict()).unwrap();
        assert!(recs.is_empty());
        assert_eq!(stats, CorpusStats::default());
        let (recs, stats) = build_corpus(
            "{\"id\":1}\n{\"id\":\"a\",\"text\":\"x\"}\n".as_bytes(),
            &dict(),
        )
        .unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(stats.malformed, 1);
        assert_eq!(recs[0].topic, "unknown");
        assert!(stats.reconciles());
    }

    #[test]
    fn chunked_equals_sequential() {
        let lines: Vec<(usize, String)> = (0..200)
            .map(|i| (i + 1, line(i % 150, &format!("t{} ethanol", i % 150), "X")))
            .collect();
        let d = dict();
        let mut a = CorpusBuilder::new(&d);
        let chunked: Vec<_> = lines.chunks(17).flat_map(|c| a.push_chunk(c)).collect();
        let mut b = CorpusBuilder::new(&d);
        let seq: Vec<_> = lines
            .iter()
            .filter_map(|(n, l)| b.push_line(l, *n))
            .collect();
        assert_eq!(chunked, seq);
        assert_eq!(a.finish(), b.finish());
    }
}
