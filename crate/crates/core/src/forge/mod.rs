//! Instruction records: molecule-text, knowledge-graph and expert-synthetic
//! training families, plus downstream-task queries.

mod batch;
mod card;
mod design;
mod kgfacts;
mod moltext;
mod properties;
mod queries;
mod synth;
pub mod templates;
pub mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use batch::{map_ordered, BatchStats};
pub use card::render_card;
pub use design::{design_query, reverse_design_instruction, Constraint, Target};
pub use kgfacts::{
    fact_context, kg_answer, kg_context, kg_instruction, kg_question, path_to_text, AnswerVariant,
    KgConfig,
};
pub use moltext::moltext_instruction;
pub use properties::{PropertyRow, PropertySchema, PropertySpec, PropertyTable, PropertyValue};
pub use queries::{ddi_query, downstream_query, label_query, property_query, vs_query, QuerySpec};
pub use synth::synth_instruction;
pub use templates::TemplateSet;

use crate::chem;
use crate::kg::KgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Describe,
    KgFact,
    Property,
    Design,
    VsQuery,
    DdiQuery,
    PropQuery,
}

impl Task {
    pub fn as_str(self) -> &'static str {
        match self {
            Task::Describe => "describe",
            Task::KgFact => "kg_fact",
            Task::Property => "property",
            Task::Design => "design",
            Task::VsQuery => "vs_query",
            Task::DdiQuery => "ddi_query",
            Task::PropQuery => "prop_query",
        }
    }

    /// Query families carry no answer unless labelled for training.
    pub fn is_query(self) -> bool {
        matches!(self, Task::VsQuery | Task::DdiQuery | Task::PropQuery)
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One supervised sample or one downstream query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstructionRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub context: Option<String>,
    pub question: String,
    pub answer: String,
    pub task: Task,
    pub provenance: Vec<String>,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<RecordMeta>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordMeta {
    /// Path sentences in the context.
    pub paths: usize,
    /// Some paths were dropped to respect the context bound.
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForgeError {
    #[error("InvalidSmiles: {smiles:?}: {reason}")]
    InvalidSmiles { smiles: String, reason: String },
    #[error("EmptyDescription")]
    EmptyDescription,
    #[error("EmptyPropertyRow")]
    EmptyPropertyRow,
    #[error("EmptyConstraints")]
    EmptyConstraints,
    #[error("UnknownObjective: {0}")]
    UnknownObjective(String),
    #[error("UnknownEntity: {0}")]
    UnknownEntity(String),
    #[error("UnknownProperty: {0}")]
    UnknownProperty(String),
    #[error("MissingEntityMetadata: {0}")]
    MissingEntityMetadata(String),
    #[error("MissingGraph: {0} queries need a knowledge graph")]
    MissingGraph(Task),
    #[error("UnboundPlaceholder: {{{placeholder}}} in {template:?}")]
    UnboundPlaceholder {
        template: String,
        placeholder: String,
    },
    #[error("NonFiniteValue: {property} on line {line}")]
    NonFiniteValue { property: String, line: usize },
    #[error("MalformedRow: line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("template error: {0}")]
    Template(String),
    #[error("io error: {0}")]
    Io(String),
}

impl ForgeError {
    /// Short category name used when counting skipped records.
    pub fn kind(&self) -> &'static str {
        match self {
            ForgeError::InvalidSmiles { .. } => "InvalidSmiles",
            ForgeError::EmptyDescription => "EmptyDescription",
            ForgeError::EmptyPropertyRow => "EmptyPropertyRow",
            ForgeError::EmptyConstraints => "EmptyConstraints",
            ForgeError::UnknownObjective(_) => "UnknownObjective",
            ForgeError::UnknownEntity(_) => "UnknownEntity",
            ForgeError::UnknownProperty(_) => "UnknownProperty",
            ForgeError::MissingEntityMetadata(_) => "MissingEntityMetadata",
            ForgeError::MissingGraph(_) => "MissingGraph",
            ForgeError::UnboundPlaceholder { .. } => "UnboundPlaceholder",
            ForgeError::NonFiniteValue { .. } => "NonFiniteValue",
            ForgeError::MalformedRow { .. } => "MalformedRow",
            ForgeError::Template(_) => "Template",
            ForgeError::Io(_) => "Io",
        }
    }
}

impl From<KgError> for ForgeError {
    fn from(e: KgError) -> Self {
        match e {
            KgError::UnknownEntity(id) => ForgeError::UnknownEntity(id),
            other => ForgeError::UnknownEntity(other.to_string()),
        }
    }
}

/// Validity gate: every SMILES placed in a record must parse and pass the
/// valence check.
pub(crate) fn require_valid(smiles: &str) -> Result<(), ForgeError> {
    chem::parse_valid(smiles)
        .map(|_| ())
        .map_err(|e| ForgeError::InvalidSmiles {
            smiles: smiles.to_string(),
            reason: e.to_string(),
        })
}
