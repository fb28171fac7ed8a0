use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::templates::{render, TemplateSet};
use super::text::{article, format_number, join_clauses};
use super::{require_valid, ForgeError, InstructionRecord, Task};
use crate::chem::DescriptorKind;

/// Desired outcome for one objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    Flag(bool),
    Value(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constraint {
    pub name: String,
    pub target: Target,
}

impl Constraint {
    pub fn flag(name: &str, on: bool) -> Constraint {
        Constraint {
            name: name.to_string(),
            target: Target::Flag(on),
        }
    }

    pub fn value(name: &str, v: f64) -> Constraint {
        Constraint {
            name: name.to_string(),
            target: Target::Value(v),
        }
    }
}

fn phrase(c: &Constraint, templates: &TemplateSet) -> Result<String, ForgeError> {
    if let Some(p) = templates.objectives.get(&c.name) {
        let missing = || {
            ForgeError::UnknownObjective(format!(
                "{} has no phrase for target {:?}",
                c.name, c.target
            ))
        };
        return match c.target {
            Target::Flag(true) => p.flag_yes.clone().ok_or_else(missing),
            Target::Flag(false) => p.flag_no.clone().ok_or_else(missing),
            Target::Value(v) => {
                let t = p.value.as_ref().ok_or_else(missing)?;
                render(t, &[("value", &format_number(v))])
            }
        };
    }
    if DescriptorKind::from_str(&c.name).is_ok() {
        return match c.target {
            Target::Value(v) => Ok(format!(
                "has {} {} of {}",
                article(&c.name),
                c.name,
                format_number(v)
            )),
            Target::Flag(_) => Err(ForgeError::UnknownObjective(format!(
                "{} needs a numeric target",
                c.name
            ))),
        };
    }
    Err(ForgeError::UnknownObjective(c.name.clone()))
}

fn design_question(
    constraints: &[Constraint],
    seed: u64,
    templates: &TemplateSet,
) -> Result<String, ForgeError> {
    if constraints.is_empty() {
        return Err(ForgeError::EmptyConstraints);
    }
    let phrases = constraints
        .iter()
        .map(|c| phrase(c, templates))
        .collect::<Result<Vec<_>, _>>()?;
    let questions = &templates.templates.design_questions;
    let template = &questions[(seed % questions.len() as u64) as usize];
    render(template, &[("constraints", &join_clauses(&phrases))])
}

/// Design prompt for a downstream model: the constraint question with an
/// empty answer.
pub fn design_query(
    constraints: &[Constraint],
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    Ok(InstructionRecord {
        id: None,
        context: None,
        question: design_question(constraints, seed, templates)?,
        answer: String::new(),
        task: Task::Design,
        provenance: constraints
            .iter()
            .map(|c| format!("objective:{}", c.name))
            .collect(),
        seed,
        meta: None,
    })
}

/// Reverse instruction: the constraints become the question and the source
/// molecule the answer.
pub fn reverse_design_instruction(
    smiles: &str,
    constraints: &[Constraint],
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    require_valid(smiles)?;
    let question = design_question(constraints, seed, templates)?;
    let mut provenance = vec![format!("molecule:{smiles}")];
    provenance.extend(constraints.iter().map(|c| format!("objective:{}", c.name)));
    Ok(InstructionRecord {
        id: None,
        context: None,
        question,
        answer: smiles.to_string(),
        task: Task::Design,
        provenance,
        seed,
        meta: None,
    })
}
