//! Pretraining corpus: drug-mention normalization, deduplicated record
//! emission and seeded train/test splits.

mod build;
mod dictionary;
mod normalize;
mod split;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use build::{build_corpus, CorpusBuilder, CorpusStats, Document, TopicShare};
pub use dictionary::{DictEntry, EntityDictionary, ReplacementKind};
pub use normalize::{normalize_annotated, normalize_entities, Annotation, AnnotationSet, Span};
pub use split::{split_assignment, split_assignment_keyed, split_records, split_records_keyed};

/// One replacement made in a document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    /// Byte span of the replacement in the normalized text.
    pub span: (usize, usize),
    /// Byte span of the surface form in the input text.
    pub source: (usize, usize),
    pub surface: String,
    pub id: String,
    pub replacement: String,
    /// The surface form maps to more than one dictionary entry; the first
    /// listed entry was used.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub id: String,
    pub text: String,
    pub topic: String,
    pub substitutions: Vec<Substitution>,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error("MalformedDocument: line {line}: {reason}")]
    MalformedDocument { line: usize, reason: String },
    #[error("MalformedDictionaryRow: line {line}: {reason}")]
    MalformedDictionaryRow { line: usize, reason: String },
    #[error("InvalidReplacement: line {line}: {reason}")]
    InvalidReplacement { line: usize, reason: String },
    #[error(
        "ReplacementContainsSurface: replacement for {id:?} contains surface form {surface:?}"
    )]
    ReplacementContainsSurface { id: String, surface: String },
    #[error("InvalidAnnotation: document {doc_id:?}: {reason}")]
    InvalidAnnotation { doc_id: String, reason: String },
    #[error("InvalidRatio: {0} is not in (0, 1)")]
    InvalidRatio(f64),
    #[error("io error: {0}")]
    Io(String),
}
