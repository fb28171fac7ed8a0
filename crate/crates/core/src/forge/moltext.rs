use super::templates::{render, TemplateSet};
use super::{require_valid, ForgeError, InstructionRecord, Task};

/// Molecule-text pair as a description instruction. The description is
/// kept verbatim.
pub fn moltext_instruction(
    smiles: &str,
    description: &str,
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    require_valid(smiles)?;
    if description.trim().is_empty() {
        return Err(ForgeError::EmptyDescription);
    }
    Ok(InstructionRecord {
        id: None,
        context: None,
        question: render(&templates.templates.moltext_question, &[("smiles", smiles)])?,
        answer: description.to_string(),
        task: Task::Describe,
        provenance: vec![format!("molecule:{smiles}")],
        seed,
        meta: None,
    })
}
