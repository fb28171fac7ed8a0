use super::properties::PropertyValue;
use super::templates::{render, TemplateSet};
use super::text::{article, capitalize, format_number, join_clauses};
use super::{require_valid, ForgeError, InstructionRecord, Task};

/// Expert-synthetic property instruction. Numeric clauses come first in
/// schema order, followed by clauses for boolean properties.
pub fn synth_instruction(
    smiles: &str,
    props: &[(&str, PropertyValue)],
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    require_valid(smiles)?;
    if props.is_empty() {
        return Err(ForgeError::EmptyPropertyRow);
    }
    let mut clauses = Vec::with_capacity(props.len());
    for (name, value) in props {
        if let PropertyValue::Number(v) = value {
            if !v.is_finite() {
                return Err(ForgeError::NonFiniteValue {
                    property: name.to_string(),
                    line: 0,
                });
            }
            let display = templates.property_name(name);
            let template = if clauses.is_empty() {
                &templates.templates.synth_first_clause
            } else {
                &templates.templates.synth_clause
            };
            let value = format_number(*v);
            clauses.push(render(
                template,
                &[
                    ("article", article(display)),
                    ("property", display),
                    ("value", &value),
                ],
            )?);
        }
    }
    for (name, value) in props {
        if let PropertyValue::Flag(b) = value {
            let clause = match templates.qualitative.get(*name) {
                Some(q) if *b => q.yes.clone(),
                Some(q) => q.no.clone(),
                None if *b => format!("it is {name}"),
                None => format!("it is not {name}"),
            };
            clauses.push(clause);
        }
    }
    let answer = format!("{}.", capitalize(&join_clauses(&clauses)));
    let mut provenance = vec![format!("molecule:{smiles}")];
    provenance.extend(props.iter().map(|(n, _)| format!("property:{n}")));
    Ok(InstructionRecord {
        id: None,
        context: None,
        question: render(&templates.templates.synth_question, &[("smiles", smiles)])?,
        answer,
        task: Task::Property,
        provenance,
        seed,
        meta: None,
    })
}
