//! Editable template file: instruction wording, relation verb phrases,
//! property display names and constraint phrases.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::ForgeError;

const DEFAULT_TOML: &str = include_str!("../../assets/templates.toml");

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateSet {
    pub version: u32,
    pub templates: Templates,
    pub relation_default: VerbPhrase,
    #[serde(default)]
    pub relations: BTreeMap<String, VerbPhrase>,
    #[serde(default)]
    pub property_names: BTreeMap<String, String>,
    #[serde(default)]
    pub qualitative: BTreeMap<String, Qualitative>,
    #[serde(default)]
    pub objectives: BTreeMap<String, ObjectivePhrase>,
    #[serde(default)]
    pub properties: KnownProperties,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Templates {
    pub context_header: String,
    pub path_clause: String,
    pub kg_question: String,
    pub kg_answer_card: String,
    pub kg_answer_narrative: String,
    pub moltext_question: String,
    pub synth_question: String,
    pub synth_first_clause: String,
    pub synth_clause: String,
    pub design_questions: Vec<String>,
    pub vs_question: String,
    pub ddi_question: String,
    pub prop_question: String,
    pub vs_yes: String,
    pub vs_no: String,
    pub ddi_yes: String,
    pub ddi_no: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerbPhrase {
    pub active: String,
    pub passive: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Qualitative {
    pub yes: String,
    pub no: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectivePhrase {
    pub value: Option<String>,
    pub flag_yes: Option<String>,
    pub flag_no: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnownProperties {
    #[serde(default)]
    pub known: Vec<String>,
}

impl Default for TemplateSet {
    fn default() -> Self {
        TemplateSet::from_toml(DEFAULT_TOML).expect("shipped template file parses")
    }
}

impl TemplateSet {
    pub fn from_toml(text: &str) -> Result<TemplateSet, ForgeError> {
        let set: TemplateSet =
            toml::from_str(text).map_err(|e| ForgeError::Template(e.to_string()))?;
        if set.templates.design_questions.is_empty() {
            return Err(ForgeError::Template("design_questions is empty".into()));
        }
        Ok(set)
    }

    pub fn load(path: &Path) -> Result<TemplateSet, ForgeError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ForgeError::Io(format!("{}: {e}", path.display())))?;
        TemplateSet::from_toml(&text)
    }

    /// Verb phrase for `relation` in the given direction, with `{r}` bound.
    pub fn verb(&self, relation: &str, forward: bool) -> Result<String, ForgeError> {
        let phrase = self
            .relations
            .get(relation)
            .or_else(|| self.relations.get(&relation.to_lowercase()))
            .unwrap_or(&self.relation_default);
        let t = if forward {
            &phrase.active
        } else {
            &phrase.passive
        };
        render(t, &[("r", relation)])
    }

    /// Display name of a property in synthetic answers.
    pub fn property_name<'a>(&'a self, name: &'a str) -> &'a str {
        self.property_names.get(name).map_or(name, String::as_str)
    }
}

/// Substitutes `{name}` placeholders. A placeholder with no binding is an
/// error; bindings the template does not use are ignored.
pub fn render(template: &str, bindings: &[(&str, &str)]) -> Result<String, ForgeError> {
    let mut out = String::with_capacity(template.len() + 32);
    let mut rest = template;
    while let Some(open) = rest.find('{') {
        out.push_str(&rest[..open]);
        let after = &rest[open + 1..];
        let Some(close) = after.find('}') else {
            return Err(ForgeError::Template(format!(
                "unterminated placeholder in {template:?}"
            )));
        };
        let name = &after[..close];
        match bindings.iter().find(|(k, _)| *k == name) {
            Some((_, v)) => out.push_str(v),
            None => {
                return Err(ForgeError::UnboundPlaceholder {
                    template: template.to_string(),
                    placeholder: name.to_string(),
                })
            }
        }
        rest = &after[close + 1..];
    }
    out.push_str(rest);
    Ok(out)
}
