//! Downstream-task queries: virtual screening, drug-drug interaction,
//! property prediction and design prompts. Queries carry an empty answer
//! unless labelled.

use serde::{Deserialize, Serialize};

use super::design::{design_query, Constraint};
use super::kgfacts::{fact_context, KgConfig};
use super::templates::{render, TemplateSet};
use super::{require_valid, ForgeError, InstructionRecord, Task};
use crate::kg::KnowledgeGraph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum QuerySpec {
    Vs { drug: String, target: String },
    Ddi { a: String, b: String },
    Property { smiles: String, property: String },
    Design { constraints: Vec<Constraint> },
}

impl QuerySpec {
    pub fn task(&self) -> Task {
        match self {
            QuerySpec::Vs { .. } => Task::VsQuery,
            QuerySpec::Ddi { .. } => Task::DdiQuery,
            QuerySpec::Property { .. } => Task::PropQuery,
            QuerySpec::Design { .. } => Task::Design,
        }
    }
}

/// Bindings for a pair of graph entities: types and display names.
fn pair<'a>(
    kg: &'a KnowledgeGraph,
    a: &str,
    b: &str,
) -> Result<[(&'static str, &'a str); 4], ForgeError> {
    let ea = kg.entity(kg.require(a)?);
    let eb = kg.entity(kg.require(b)?);
    Ok([
        ("h_type", ea.entity_type.noun()),
        ("h", ea.name.as_str()),
        ("t_type", eb.entity_type.noun()),
        ("t", eb.name.as_str()),
    ])
}

fn pair_context(
    kg: &KnowledgeGraph,
    a: &str,
    b: &str,
    cfg: Option<&KgConfig>,
    templates: &TemplateSet,
) -> Result<(Option<String>, Option<super::RecordMeta>), ForgeError> {
    match cfg {
        None => Ok((None, None)),
        Some(cfg) => {
            let (ctx, meta) = fact_context(kg, kg.require(a)?, kg.require(b)?, cfg, templates)?;
            Ok((Some(ctx), Some(meta)))
        }
    }
}

/// Drug-target interaction query. `context` enables the enclosing-subgraph
/// context with the given limits.
pub fn vs_query(
    kg: &KnowledgeGraph,
    drug: &str,
    target: &str,
    context: Option<&KgConfig>,
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    let bind = pair(kg, drug, target)?;
    let question = render(&templates.templates.vs_question, &bind)?;
    let (context, meta) = pair_context(kg, drug, target, context, templates)?;
    Ok(InstructionRecord {
        id: None,
        context,
        question,
        answer: String::new(),
        task: Task::VsQuery,
        provenance: vec![format!("pair:{drug}|{target}")],
        seed,
        meta,
    })
}

pub fn ddi_query(
    kg: &KnowledgeGraph,
    a: &str,
    b: &str,
    context: Option<&KgConfig>,
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    let bind = pair(kg, a, b)?;
    let question = render(
        &templates.templates.ddi_question,
        &[("a", bind[1].1), ("b", bind[3].1)],
    )?;
    let (context, meta) = pair_context(kg, a, b, context, templates)?;
    Ok(InstructionRecord {
        id: None,
        context,
        question,
        answer: String::new(),
        task: Task::DdiQuery,
        provenance: vec![format!("pair:{a}|{b}")],
        seed,
        meta,
    })
}

/// Property query. The property must be listed in the template set or in
/// `extra_properties` (for example the columns of a loaded table).
pub fn property_query(
    smiles: &str,
    property: &str,
    extra_properties: &[String],
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    let known = templates.properties.known.iter().chain(extra_properties);
    if !known.into_iter().any(|p| p == property) {
        return Err(ForgeError::UnknownProperty(property.to_string()));
    }
    require_valid(smiles)?;
    Ok(InstructionRecord {
        id: None,
        context: None,
        question: render(
            &templates.templates.prop_question,
            &[("property", property), ("smiles", smiles)],
        )?,
        answer: String::new(),
        task: Task::PropQuery,
        provenance: vec![format!("molecule:{smiles}"), format!("property:{property}")],
        seed,
        meta: None,
    })
}

/// Dispatches on the query kind. `context` applies to pair queries only.
pub fn downstream_query(
    spec: &QuerySpec,
    kg: Option<&KnowledgeGraph>,
    context: Option<&KgConfig>,
    extra_properties: &[String],
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    match spec {
        QuerySpec::Vs { drug, target } => vs_query(
            kg.ok_or(ForgeError::MissingGraph(Task::VsQuery))?,
            drug,
            target,
            context,
            seed,
            templates,
        ),
        QuerySpec::Ddi { a, b } => ddi_query(
            kg.ok_or(ForgeError::MissingGraph(Task::DdiQuery))?,
            a,
            b,
            context,
            seed,
            templates,
        ),
        QuerySpec::Property { smiles, property } => {
            property_query(smiles, property, extra_properties, seed, templates)
        }
        QuerySpec::Design { constraints } => design_query(constraints, seed, templates),
    }
}

/// Fills the yes/no answer of a pair query for training use.
pub fn label_query(
    record: &mut InstructionRecord,
    spec: &QuerySpec,
    kg: &KnowledgeGraph,
    label: bool,
    templates: &TemplateSet,
) -> Result<(), ForgeError> {
    let tpl = &templates.templates;
    record.answer = match spec {
        QuerySpec::Vs { drug, target } => {
            let bind = pair(kg, drug, target)?;
            render(if label { &tpl.vs_yes } else { &tpl.vs_no }, &bind)?
        }
        QuerySpec::Ddi { a, b } => {
            let bind = pair(kg, a, b)?;
            render(
                if label { &tpl.ddi_yes } else { &tpl.ddi_no },
                &[("a", bind[1].1), ("b", bind[3].1)],
            )?
        }
        QuerySpec::Property { property, .. } => {
            return Err(ForgeError::UnknownProperty(format!(
                "{property}: property queries take no yes/no label"
            )))
        }
        QuerySpec::Design { .. } => return Err(ForgeError::EmptyConstraints),
    };
    Ok(())
}
