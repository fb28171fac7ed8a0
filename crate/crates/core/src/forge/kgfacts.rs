//! Knowledge-graph facts as relationship QA with path contexts.

use serde::{Deserialize, Serialize};

use super::templates::{render, TemplateSet};
use super::text::capitalize;
use super::{ForgeError, InstructionRecord, RecordMeta, Task};
use crate::kg::{
    enclosing_subgraph_by_id, enumerate_paths_capped, EntityId, KnowledgeGraph, Path, Triple,
    DEFAULT_HOPS, DEFAULT_MAX_PATHS, DEFAULT_MAX_PATH_LEN,
};

/// Upper bound on path sentences in one context.
pub const MAX_CONTEXT_SENTENCES: usize = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerVariant {
    /// "Drug h plays a role r in the process of t."
    #[default]
    Card,
    /// "The drug h plays a role r to the disease t."
    Narrative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KgConfig {
    pub hops: usize,
    pub max_path_len: usize,
    pub max_paths: usize,
    pub answer: AnswerVariant,
}

impl Default for KgConfig {
    fn default() -> Self {
        KgConfig {
            hops: DEFAULT_HOPS,
            max_path_len: DEFAULT_MAX_PATH_LEN,
            max_paths: DEFAULT_MAX_PATHS,
            answer: AnswerVariant::Card,
        }
    }
}

fn named(kg: &KnowledgeGraph, e: EntityId) -> Result<(&str, &str), ForgeError> {
    let ent = kg.entity(e);
    if ent.name.trim().is_empty() {
        return Err(ForgeError::MissingEntityMetadata(ent.id.clone()));
    }
    Ok((ent.entity_type.noun(), ent.name.as_str()))
}

/// One sentence for a path, clauses joined with ", and". The empty path
/// renders as the empty string.
pub fn path_to_text(
    path: &Path,
    kg: &KnowledgeGraph,
    templates: &TemplateSet,
) -> Result<String, ForgeError> {
    let mut clauses = Vec::with_capacity(path.len());
    for hop in &path.hops {
        let (h_type, h) = named(kg, hop.from)?;
        let (t_type, t) = named(kg, hop.to)?;
        let verb = templates.verb(kg.relation(hop.relation), hop.forward)?;
        clauses.push(render(
            &templates.templates.path_clause,
            &[
                ("h_type", h_type),
                ("h", h),
                ("verb", &verb),
                ("t_type", t_type),
                ("t", t),
            ],
        )?);
    }
    Ok(capitalize(&clauses.join(", and ")))
}

/// Header line followed by one sentence per line.
pub fn kg_context(sentences: &[String], templates: &TemplateSet) -> String {
    let mut out = templates.templates.context_header.clone();
    for s in sentences {
        out.push('\n');
        out.push_str(s);
        out.push('.');
    }
    out
}

/// Renders the path sentences between `h` and `t` and applies the context
/// bound. Returns the context and its metadata.
pub fn fact_context(
    kg: &KnowledgeGraph,
    h: EntityId,
    t: EntityId,
    cfg: &KgConfig,
    templates: &TemplateSet,
) -> Result<(String, RecordMeta), ForgeError> {
    let sub = enclosing_subgraph_by_id(kg, h, t, cfg.hops);
    let set = enumerate_paths_capped(&sub, h, t, cfg.max_path_len, cfg.max_paths);
    let mut sentences = Vec::with_capacity(set.paths.len());
    for p in &set.paths {
        let s = path_to_text(p, kg, templates)?;
        if !s.is_empty() {
            sentences.push(s);
        }
    }
    let mut truncated = set.truncated;
    if sentences.len() > MAX_CONTEXT_SENTENCES {
        // Drop the longest sentences, keeping the rest in path order.
        let mut by_len: Vec<usize> = (0..sentences.len()).collect();
        by_len.sort_by(|&a, &b| sentences[b].len().cmp(&sentences[a].len()).then(b.cmp(&a)));
        let mut drop = vec![false; sentences.len()];
        for &i in &by_len[..sentences.len() - MAX_CONTEXT_SENTENCES] {
            drop[i] = true;
        }
        sentences = sentences
            .into_iter()
            .zip(drop)
            .filter_map(|(s, d)| (!d).then_some(s))
            .collect();
        truncated = true;
    }
    let meta = RecordMeta {
        paths: sentences.len(),
        truncated,
    };
    Ok((kg_context(&sentences, templates), meta))
}

pub fn kg_question(
    kg: &KnowledgeGraph,
    fact: &Triple,
    templates: &TemplateSet,
) -> Result<String, ForgeError> {
    let (h_type, h) = named(kg, fact.h)?;
    let (t_type, t) = named(kg, fact.t)?;
    render(
        &templates.templates.kg_question,
        &[("h_type", h_type), ("h", h), ("t_type", t_type), ("t", t)],
    )
}

pub fn kg_answer(
    kg: &KnowledgeGraph,
    fact: &Triple,
    variant: AnswerVariant,
    templates: &TemplateSet,
) -> Result<String, ForgeError> {
    let (h_type, h) = named(kg, fact.h)?;
    let (t_type, t) = named(kg, fact.t)?;
    let template = match variant {
        AnswerVariant::Card => &templates.templates.kg_answer_card,
        AnswerVariant::Narrative => &templates.templates.kg_answer_narrative,
    };
    let cap = capitalize(h_type);
    render(
        template,
        &[
            ("h_type", h_type),
            ("H_type", &cap),
            ("h", h),
            ("r", kg.relation(fact.r)),
            ("t_type", t_type),
            ("t", t),
        ],
    )
}

pub fn kg_instruction(
    kg: &KnowledgeGraph,
    fact: &Triple,
    cfg: &KgConfig,
    seed: u64,
    templates: &TemplateSet,
) -> Result<InstructionRecord, ForgeError> {
    if !kg.contains(fact) {
        let (h, r, t) = kg.labels(fact);
        return Err(ForgeError::UnknownEntity(format!(
            "fact ({h}, {r}, {t}) is not in the graph"
        )));
    }
    let (context, meta) = fact_context(kg, fact.h, fact.t, cfg, templates)?;
    let (h, r, t) = kg.labels(fact);
    Ok(InstructionRecord {
        id: None,
        context: Some(context),
        question: kg_question(kg, fact, templates)?,
        answer: kg_answer(kg, fact, cfg.answer, templates)?,
        task: Task::KgFact,
        provenance: vec![format!("triple:{h}|{r}|{t}")],
        seed,
        meta: Some(meta),
    })
}
