use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use super::config::{GenerateConfig, KgLimits, LoadedConfig, PairKind, SplitConfig, StageConfig};
use super::io::{sha256_file, AtomicFile, LineChunks};
use super::manifest::{FileDigest, OutputFile, StageReport};
use crate::corpus::{
    split_assignment, split_assignment_keyed, AnnotationSet, CorpusBuilder, EntityDictionary, Span,
};
use crate::eval::{self, EvalReport};
use crate::forge::{
    downstream_query, kg_instruction, label_query, map_ordered, moltext_instruction,
    reverse_design_instruction, synth_instruction, BatchStats, Constraint, ForgeError,
    InstructionRecord, KgConfig, PropertySchema, QuerySpec, Task, TemplateSet,
};
use crate::kg::{load_kg_files, sample_negatives, KnowledgeGraph, LoadStats, Triple};

/// splitmix64 finalizer.
pub(crate) fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) fn record_seed(stage_seed: u64, index: usize) -> u64 {
    mix(stage_seed ^ mix(index as u64))
}

pub(crate) struct Ctx<'a> {
    pub cfg: &'a LoadedConfig,
    pub templates: TemplateSet,
    kg: Option<(KnowledgeGraph, LoadStats)>,
}

type StageResult<T> = Result<T, String>;

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> String + '_ {
    move |e| format!("{}: {e}", path.display())
}

impl<'a> Ctx<'a> {
    pub fn new(cfg: &'a LoadedConfig, templates: TemplateSet) -> Ctx<'a> {
        Ctx {
            cfg,
            templates,
            kg: None,
        }
    }

    fn kg(&mut self) -> StageResult<&(KnowledgeGraph, LoadStats)> {
        if self.kg.is_none() {
            let src = self.cfg.config.kg.as_ref().ok_or("no [kg] section")?;
            let loaded = load_kg_files(
                &self.cfg.resolve(&src.triples),
                &self.cfg.resolve(&src.entities),
            )
            .map_err(|e| e.to_string())?;
            self.kg = Some(loaded);
        }
        Ok(self.kg.as_ref().expect("just loaded"))
    }

    /// Path as written relative to the config directory when possible.
    fn display(&self, p: &Path) -> String {
        p.strip_prefix(&self.cfg.base_dir)
            .unwrap_or(p)
            .display()
            .to_string()
    }

    fn digest(&self, p: &Path) -> StageResult<FileDigest> {
        Ok(FileDigest {
            path: self.display(p),
            sha256: sha256_file(p).map_err(io_err(p))?,
        })
    }

    fn kg_config(limits: &KgLimits, answer: crate::forge::AnswerVariant) -> KgConfig {
        let d = KgConfig::default();
        KgConfig {
            hops: limits.hops.unwrap_or(d.hops),
            max_path_len: limits.max_path_len.unwrap_or(d.max_path_len),
            max_paths: limits.max_paths.unwrap_or(d.max_paths),
            answer,
        }
    }
}

struct Report {
    stats: BatchStats,
    inputs: Vec<FileDigest>,
    outputs: Vec<OutputFile>,
    details: Option<Value>,
}

pub(crate) fn run_stage(
    ctx: &mut Ctx,
    index: usize,
    stage: &StageConfig,
) -> StageResult<StageReport> {
    let seed = mix(ctx.cfg.config.seed ^ mix(index as u64 + 1));
    let name = stage.name(index);
    let mut inputs = Vec::new();
    for (_, p) in stage.inputs() {
        inputs.push(ctx.digest(&ctx.cfg.resolve(p))?);
    }
    let mut report = match stage {
        StageConfig::Corpus {
            documents,
            dictionary,
            case_insensitive,
            annotations,
            output,
            ..
        } => corpus_stage(
            ctx,
            documents,
            dictionary,
            *case_insensitive,
            annotations.as_deref(),
            output,
        )?,
        StageConfig::KgInstructions {
            output,
            answer,
            limits,
            ..
        } => kg_stage(ctx, &name, seed, output, Ctx::kg_config(limits, *answer))?,
        StageConfig::Moltext { input, output, .. } => {
            moltext_stage(ctx, &name, seed, input, output)?
        }
        StageConfig::Synth {
            properties, output, ..
        } => synth_stage(ctx, &name, seed, properties, output)?,
        StageConfig::Design { input, output, .. } => design_stage(ctx, &name, seed, input, output)?,
        StageConfig::Queries {
            input,
            generate,
            output,
            answer_key,
            context,
            labels,
            limits,
            extra_properties,
            ..
        } => queries_stage(
            ctx,
            seed,
            QueryStageArgs {
                input: input.as_deref(),
                generate: generate.as_ref(),
                output,
                answer_key: answer_key.as_deref(),
                context: *context,
                labels: *labels,
                limits,
                extra_properties,
            },
        )?,
        StageConfig::Eval {
            predictions,
            queries,
            output,
            table,
            ..
        } => eval_stage(ctx, predictions, queries, output, table.as_deref())?,
    };
    inputs.append(&mut report.inputs);
    let split = match stage {
        StageConfig::Corpus { output, split, .. }
        | StageConfig::KgInstructions { output, split, .. }
        | StageConfig::Moltext { output, split, .. }
        | StageConfig::Synth { output, split, .. }
        | StageConfig::Design { output, split, .. } => split.as_ref().map(|s| (output, s)),
        _ => None,
    };
    if let Some((output, s)) = split {
        report
            .outputs
            .extend(split_file(ctx, &ctx.cfg.output(output), s, mix(seed))?);
    }
    Ok(StageReport {
        name,
        kind: stage.kind().to_string(),
        seed,
        inputs,
        outputs: report.outputs,
        records_in: report.stats.records_in,
        records_out: report.stats.records_out,
        skipped: report.stats.skipped,
        details: report.details,
    })
}

/// Streams `(line, text)` chunks through `f` in parallel and writes the
/// emitted records in input order.
fn emit_records<F>(
    chunks: impl Iterator<Item = std::io::Result<Vec<(usize, String)>>>,
    out: &mut AtomicFile,
    stats: &mut BatchStats,
    source: &Path,
    f: F,
) -> StageResult<()>
where
    F: Fn(usize, &str) -> Result<InstructionRecord, ForgeError> + Sync + Send,
{
    for chunk in chunks {
        let chunk = chunk.map_err(io_err(source))?;
        let results = map_ordered(&chunk, |(n, l)| f(*n, l));
        for ((n, _), r) in chunk.iter().zip(results) {
            stats.tally(&r);
            match r {
                Ok(rec) => out.write_json(&rec).map_err(|e| e.to_string())?,
                Err(e) => log::debug!("{}:{n}: skipped: {e}", source.display()),
            }
        }
    }
    Ok(())
}

fn malformed(line: usize, e: impl std::fmt::Display) -> ForgeError {
    ForgeError::MalformedRow {
        line,
        reason: e.to_string(),
    }
}

fn finish(ctx: &Ctx, out: AtomicFile, path: &Path) -> StageResult<OutputFile> {
    let records = out.commit().map_err(io_err(path))?;
    Ok(OutputFile {
        path: ctx.display(path),
        records,
    })
}

fn with_id(mut rec: InstructionRecord, id: String) -> InstructionRecord {
    rec.id = Some(id);
    rec
}

fn corpus_stage(
    ctx: &mut Ctx,
    documents: &Path,
    dictionary: &Path,
    case_insensitive: bool,
    annotations: Option<&Path>,
    output: &Path,
) -> StageResult<Report> {
    let dict_path = ctx.cfg.resolve(dictionary);
    let dict = EntityDictionary::from_tsv(
        BufReader::new(File::open(&dict_path).map_err(io_err(&dict_path))?),
        case_insensitive,
    )
    .map_err(|e| format!("{}: {e}", dict_path.display()))?;
    let mut spans: HashMap<String, Vec<Span>> = HashMap::new();
    if let Some(a) = annotations {
        let path = ctx.cfg.resolve(a);
        for chunk in LineChunks::open(&path, ctx.cfg.config.chunk_size).map_err(io_err(&path))? {
            for (n, l) in chunk.map_err(io_err(&path))? {
                let set: AnnotationSet =
                    serde_json::from_str(&l).map_err(|e| format!("{}:{n}: {e}", path.display()))?;
                spans.entry(set.doc_id).or_default().extend(set.spans);
            }
        }
    }
    let mut builder = CorpusBuilder::new(&dict);
    if annotations.is_some() {
        builder = builder.with_annotations(&spans);
    }
    let docs = ctx.cfg.resolve(documents);
    let out_path = ctx.cfg.output(output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    for chunk in LineChunks::open(&docs, ctx.cfg.config.chunk_size).map_err(io_err(&docs))? {
        for rec in builder.push_chunk(&chunk.map_err(io_err(&docs))?) {
            out.write_json(&rec).map_err(|e| e.to_string())?;
        }
    }
    let cs = builder.finish();
    let mut stats = BatchStats {
        records_in: cs.documents_in,
        records_out: cs.records_out,
        skipped: BTreeMap::new(),
    };
    for (k, v) in [
        ("Duplicate", cs.duplicates),
        ("MalformedDocument", cs.malformed),
        ("InvalidAnnotation", cs.invalid_annotations),
    ] {
        if v > 0 {
            stats.skipped.insert(k.into(), v);
        }
    }
    let details = json!({
        "substitutions": cs.substitutions,
        "ambiguous_substitutions": cs.ambiguous_substitutions,
        "dictionary_entries": dict.len(),
        "topics": cs.topic_table(),
    });
    Ok(Report {
        stats,
        inputs: vec![],
        outputs: vec![finish(ctx, out, &out_path)?],
        details: Some(details),
    })
}

fn kg_digests(ctx: &Ctx) -> StageResult<Vec<FileDigest>> {
    let src = ctx.cfg.config.kg.as_ref().ok_or("no [kg] section")?;
    Ok(vec![
        ctx.digest(&ctx.cfg.resolve(&src.triples))?,
        ctx.digest(&ctx.cfg.resolve(&src.entities))?,
    ])
}

fn kg_stage(
    ctx: &mut Ctx,
    name: &str,
    seed: u64,
    output: &Path,
    cfg: KgConfig,
) -> StageResult<Report> {
    ctx.kg()?;
    let inputs = kg_digests(ctx)?;
    let (kg, load) = ctx.kg.as_ref().expect("loaded");
    let out_path = ctx.cfg.output(output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    let mut stats = BatchStats::default();
    let indexed: Vec<(usize, Triple)> = kg.triples().iter().copied().enumerate().collect();
    let mut truncated = 0usize;
    for chunk in indexed.chunks(ctx.cfg.config.chunk_size) {
        let results = map_ordered(chunk, |(i, fact)| {
            kg_instruction(kg, fact, &cfg, record_seed(seed, *i), &ctx.templates)
                .map(|r| with_id(r, format!("{name}-{i}")))
        });
        for r in results {
            stats.tally(&r);
            if let Ok(rec) = r {
                if rec.meta.as_ref().is_some_and(|m| m.truncated) {
                    truncated += 1;
                }
                out.write_json(&rec).map_err(|e| e.to_string())?;
            }
        }
    }
    let details = json!({
        "entities": load.entities,
        "triples": load.triples,
        "duplicate_triples": load.duplicate_triples,
        "self_loops_skipped": load.self_loops_skipped,
        "triples_by_relation": load.triples_by_relation,
        "truncated_contexts": truncated,
    });
    Ok(Report {
        stats,
        inputs,
        outputs: vec![finish(ctx, out, &out_path)?],
        details: Some(details),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MoltextLine {
    smiles: String,
    description: String,
}

fn moltext_stage(
    ctx: &mut Ctx,
    name: &str,
    seed: u64,
    input: &Path,
    output: &Path,
) -> StageResult<Report> {
    let src = ctx.cfg.resolve(input);
    let out_path = ctx.cfg.output(output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    let mut stats = BatchStats::default();
    let chunks = LineChunks::open(&src, ctx.cfg.config.chunk_size).map_err(io_err(&src))?;
    let t = &ctx.templates;
    emit_records(chunks, &mut out, &mut stats, &src, |n, l| {
        let row: MoltextLine = serde_json::from_str(l).map_err(|e| malformed(n, e))?;
        moltext_instruction(&row.smiles, &row.description, record_seed(seed, n), t)
            .map(|r| with_id(r, format!("{name}-{n}")))
    })?;
    Ok(Report {
        stats,
        inputs: vec![],
        outputs: vec![finish(ctx, out, &out_path)?],
        details: None,
    })
}

fn synth_stage(
    ctx: &mut Ctx,
    name: &str,
    seed: u64,
    properties: &Path,
    output: &Path,
) -> StageResult<Report> {
    let src = ctx.cfg.resolve(properties);
    let mut chunks = LineChunks::open(&src, ctx.cfg.config.chunk_size).map_err(io_err(&src))?;
    let header = chunks
        .header()
        .map_err(io_err(&src))?
        .ok_or_else(|| format!("{}: missing header", src.display()))?;
    let schema =
        PropertySchema::from_header(&header).map_err(|e| format!("{}: {e}", src.display()))?;
    let out_path = ctx.cfg.output(output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    let mut stats = BatchStats::default();
    let t = &ctx.templates;
    let chunks =
        chunks.map(|c| c.map(|v| v.into_iter().filter(|(_, l)| !l.starts_with('#')).collect()));
    emit_records(chunks, &mut out, &mut stats, &src, |n, l| {
        let row = schema.parse_row(l, n)?;
        synth_instruction(&row.smiles, &row.present(&schema), record_seed(seed, n), t)
            .map(|r| with_id(r, format!("{name}-{n}")))
    })?;
    let details = json!({ "schema": schema.columns });
    Ok(Report {
        stats,
        inputs: vec![],
        outputs: vec![finish(ctx, out, &out_path)?],
        details: Some(details),
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DesignLine {
    smiles: String,
    constraints: Vec<Constraint>,
}

fn design_stage(
    ctx: &mut Ctx,
    name: &str,
    seed: u64,
    input: &Path,
    output: &Path,
) -> StageResult<Report> {
    let src = ctx.cfg.resolve(input);
    let out_path = ctx.cfg.output(output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    let mut stats = BatchStats::default();
    let chunks = LineChunks::open(&src, ctx.cfg.config.chunk_size).map_err(io_err(&src))?;
    let t = &ctx.templates;
    emit_records(chunks, &mut out, &mut stats, &src, |n, l| {
        let row: DesignLine = serde_json::from_str(l).map_err(|e| malformed(n, e))?;
        reverse_design_instruction(&row.smiles, &row.constraints, record_seed(seed, n), t)
            .map(|r| with_id(r, format!("{name}-{n}")))
    })?;
    Ok(Report {
        stats,
        inputs: vec![],
        outputs: vec![finish(ctx, out, &out_path)?],
        details: None,
    })
}

struct QueryStageArgs<'a> {
    input: Option<&'a Path>,
    generate: Option<&'a GenerateConfig>,
    output: &'a Path,
    answer_key: Option<&'a Path>,
    context: bool,
    labels: bool,
    limits: &'a KgLimits,
    extra_properties: &'a [String],
}

/// One query with its answer-key fields.
struct QueryItem {
    line: usize,
    query_id: String,
    spec: QuerySpec,
    label: Option<bool>,
    target_value: Option<f64>,
    training_set_ref: Option<String>,
}

fn label_value(v: &Value) -> Option<bool> {
    match v {
        Value::Bool(b) => Some(*b),
        Value::Number(n) if n.as_i64() == Some(1) => Some(true),
        Value::Number(n) if n.as_i64() == Some(0) => Some(false),
        Value::String(s) => match s.to_ascii_lowercase().as_str() {
            "yes" | "true" => Some(true),
            "no" | "false" => Some(false),
            _ => None,
        },
        _ => None,
    }
}

fn parse_query_line(n: usize, l: &str) -> Result<QueryItem, ForgeError> {
    let mut map: Map<String, Value> = serde_json::from_str(l).map_err(|e| malformed(n, e))?;
    let query_id = match map.remove("query_id") {
        None => format!("q{n}"),
        Some(Value::String(s)) => s,
        Some(other) => {
            return Err(malformed(
                n,
                format!("query_id must be a string, found {other}"),
            ))
        }
    };
    let label = match map.remove("label") {
        None | Some(Value::Null) => None,
        Some(v) => {
            Some(label_value(&v).ok_or_else(|| malformed(n, format!("unreadable label {v}")))?)
        }
    };
    let target_value = match map.remove("target_value") {
        None | Some(Value::Null) => None,
        Some(v) => Some(
            v.as_f64()
                .ok_or_else(|| malformed(n, "target_value must be a number"))?,
        ),
    };
    let training_set_ref = match map.remove("training_set_ref") {
        None | Some(Value::Null) => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err(malformed(n, "training_set_ref must be a string")),
    };
    let spec: QuerySpec =
        serde_json::from_value(Value::Object(map)).map_err(|e| malformed(n, e))?;
    Ok(QueryItem {
        line: n,
        query_id,
        spec,
        label,
        target_value,
        training_set_ref,
    })
}

fn generated_queries(
    kg: &KnowledgeGraph,
    g: &GenerateConfig,
    seed: u64,
) -> StageResult<Vec<QueryItem>> {
    let rel = kg
        .relation_id(&g.relation)
        .ok_or_else(|| format!("relation {:?} does not occur in the graph", g.relation))?;
    let mut positives: Vec<Triple> = kg
        .triples()
        .iter()
        .copied()
        .filter(|t| t.r == rel)
        .collect();
    if let Some(limit) = g.limit {
        positives.truncate(limit);
    }
    let negatives = if g.negatives_per_positive > 0 {
        sample_negatives(kg, &positives, g.negatives_per_positive, seed)
            .map_err(|e| e.to_string())?
    } else {
        Vec::new()
    };
    let mut out = Vec::with_capacity(positives.len() + negatives.len());
    let per = g.negatives_per_positive;
    for (i, p) in positives.iter().enumerate() {
        let group = std::iter::once((p, true))
            .chain(negatives[i * per..(i + 1) * per].iter().map(|n| (n, false)));
        for (t, label) in group {
            let (h, _, tail) = kg.labels(t);
            let spec = match g.kind {
                PairKind::Vs => QuerySpec::Vs {
                    drug: h.to_string(),
                    target: tail.to_string(),
                },
                PairKind::Ddi => QuerySpec::Ddi {
                    a: h.to_string(),
                    b: tail.to_string(),
                },
            };
            let k = out.len();
            out.push(QueryItem {
                line: k + 1,
                query_id: format!("q{}", k + 1),
                spec,
                label: Some(label),
                target_value: None,
                training_set_ref: None,
            });
        }
    }
    Ok(out)
}

fn answer_key_line(item: &QueryItem) -> Option<Value> {
    let (task, extra) = match &item.spec {
        QuerySpec::Vs { .. } => ("vs", json!({ "label": item.label? })),
        QuerySpec::Ddi { .. } => ("ddi", json!({ "label": item.label? })),
        QuerySpec::Property { property, .. } => (
            "property",
            json!({ "property": property, "target_value": item.target_value? }),
        ),
        QuerySpec::Design { .. } => (
            "design",
            json!({ "training_set_ref": item.training_set_ref }),
        ),
    };
    let mut obj = json!({ "query_id": item.query_id, "task": task });
    let (Value::Object(o), Value::Object(e)) = (&mut obj, extra) else {
        unreachable!("both are objects")
    };
    for (k, v) in e {
        if !v.is_null() {
            o.insert(k, v);
        }
    }
    Some(obj)
}

fn queries_stage(ctx: &mut Ctx, seed: u64, a: QueryStageArgs) -> StageResult<Report> {
    let mut stats = BatchStats::default();
    let mut inputs = Vec::new();
    if ctx.cfg.config.kg.is_some() {
        ctx.kg()?;
        inputs = kg_digests(ctx)?;
    }
    let kg = ctx.kg.as_ref().map(|(k, _)| k);
    let items: Vec<QueryItem> = match (a.input, a.generate) {
        (Some(p), _) => {
            let src = ctx.cfg.resolve(p);
            let mut items = Vec::new();
            let mut ids = HashSet::new();
            for chunk in LineChunks::open(&src, ctx.cfg.config.chunk_size).map_err(io_err(&src))? {
                for (n, l) in chunk.map_err(io_err(&src))? {
                    match parse_query_line(n, &l) {
                        Ok(item) if !ids.insert(item.query_id.clone()) => {
                            return Err(format!(
                                "{}:{n}: duplicate query_id {:?}",
                                src.display(),
                                item.query_id
                            ))
                        }
                        Ok(item) => items.push(item),
                        Err(e) => {
                            log::warn!("{}:{n}: {e}", src.display());
                            stats.skip(e.kind());
                        }
                    }
                }
            }
            items
        }
        (None, Some(g)) => {
            generated_queries(kg.ok_or("query generation needs a [kg] section")?, g, seed)?
        }
        (None, None) => return Err("no query input".into()),
    };
    let cfg = Ctx::kg_config(a.limits, Default::default());
    let context = a.context.then_some(&cfg);
    let t = &ctx.templates;
    let out_path = ctx.cfg.output(a.output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    let key_path = a.answer_key.map(|k| ctx.cfg.output(k));
    let mut key = match &key_path {
        Some(p) => Some(AtomicFile::create(p).map_err(io_err(p))?),
        None => None,
    };
    let mut unkeyed = 0usize;
    for chunk in items.chunks(ctx.cfg.config.chunk_size) {
        let results = map_ordered(chunk, |item| {
            let mut rec = downstream_query(
                &item.spec,
                kg,
                context,
                a.extra_properties,
                record_seed(seed, item.line),
                t,
            )?;
            if a.labels && matches!(rec.task, Task::VsQuery | Task::DdiQuery) {
                if let (Some(label), Some(kg)) = (item.label, kg) {
                    label_query(&mut rec, &item.spec, kg, label, t)?;
                }
            }
            Ok(with_id(rec, item.query_id.clone()))
        });
        for (item, r) in chunk.iter().zip(results) {
            stats.tally(&r);
            match r {
                Ok(rec) => {
                    out.write_json(&rec).map_err(|e| e.to_string())?;
                    if let Some(k) = key.as_mut() {
                        match answer_key_line(item) {
                            Some(v) => k.write_json(&v).map_err(|e| e.to_string())?,
                            None => unkeyed += 1,
                        }
                    }
                }
                Err(e) => log::debug!("query {}: skipped: {e}", item.query_id),
            }
        }
    }
    let mut outputs = vec![finish(ctx, out, &out_path)?];
    if let (Some(k), Some(p)) = (key, key_path) {
        outputs.push(finish(ctx, k, &p)?);
    }
    Ok(Report {
        stats,
        inputs,
        outputs,
        details: Some(json!({ "queries_without_answer_key": unkeyed })),
    })
}

/// Training set for design evaluation: one SMILES per line (first tab
/// column), `#` comments skipped, stored as canonical forms.
pub(crate) fn read_training_set(path: &Path) -> Result<HashSet<String>, eval::EvalError> {
    let f = File::open(path)
        .map_err(|e| eval::EvalError::MissingTrainingSet(format!("{}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for l in BufReader::new(f).lines() {
        let l = l.map_err(|e| eval::EvalError::Io(e.to_string()))?;
        let s = l.split('\t').next().unwrap_or("").trim().to_string();
        if !s.is_empty() && !s.starts_with('#') {
            rows.push(s);
        }
    }
    Ok(eval::canonical_set(rows.iter().map(String::as_str)))
}

/// Scores a predictions file against an answer key. Training-set references
/// resolve against the answer key's directory, then the predictions'.
pub fn evaluate_files(
    predictions: &Path,
    queries: &Path,
    fp: &crate::chem::FingerprintConfig,
) -> Result<EvalReport, eval::EvalError> {
    let pred_dir = predictions.parent().unwrap_or(Path::new("."));
    evaluate_files_in(predictions, queries, fp, &[pred_dir])
}

/// As [`evaluate_files`], trying `fallback` directories in order when a
/// training set is absent beside the answer key.
pub(crate) fn evaluate_files_in(
    predictions: &Path,
    queries: &Path,
    fp: &crate::chem::FingerprintConfig,
    fallback: &[&Path],
) -> Result<EvalReport, eval::EvalError> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|e| eval::EvalError::Io(format!("{}: {e}", p.display())))
    };
    let preds = eval::read_predictions(open(predictions)?, &predictions.display().to_string())?;
    let qs = eval::read_queries(open(queries)?, &queries.display().to_string())?;
    let base = queries.parent().unwrap_or(Path::new("."));
    let resolver = |r: &str| {
        let found = std::iter::once(base)
            .chain(fallback.iter().copied())
            .map(|d| d.join(r))
            .find(|p| p.is_file())
            .unwrap_or_else(|| base.join(r));
        read_training_set(&found)
    };
    let mut report = eval::evaluate(&preds, &qs, &resolver, fp)?;
    report.datasets = vec![
        predictions.display().to_string(),
        queries.display().to_string(),
    ];
    Ok(report)
}

fn eval_stage(
    ctx: &mut Ctx,
    predictions: &Path,
    queries: &Path,
    output: &Path,
    table: Option<&Path>,
) -> StageResult<Report> {
    let pred_path = ctx.cfg.resolve(predictions);
    let query_path = ctx.cfg.resolve(queries);
    let mut report = evaluate_files_in(
        &pred_path,
        &query_path,
        &ctx.cfg.config.fingerprint,
        &[&ctx.cfg.base_dir],
    )
    .map_err(|e| e.to_string())?;
    report.datasets = vec![ctx.display(&pred_path), ctx.display(&query_path)];
    let mut stats = BatchStats::default();
    for t in &report.tasks {
        stats.records_in += t.n_queries;
        stats.records_out += t.n_parsed;
        for (k, v) in [
            ("ParseFailure", t.parse_failures),
            ("MissingPrediction", t.missing_predictions),
        ] {
            if v > 0 {
                *stats.skipped.entry(k.into()).or_default() += v;
            }
        }
    }
    let out_path = ctx.cfg.output(output);
    let mut out = AtomicFile::create(&out_path).map_err(io_err(&out_path))?;
    let text = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    out.write_line(&text).map_err(|e| e.to_string())?;
    let mut outputs = vec![finish(ctx, out, &out_path)?];
    if let Some(t) = table {
        let p = ctx.cfg.output(t);
        let mut f = AtomicFile::create(&p).map_err(io_err(&p))?;
        for line in report.to_table().lines() {
            f.write_line(line).map_err(|e| e.to_string())?;
        }
        outputs.push(finish(ctx, f, &p)?);
    }
    let details = json!({ "unmatched_predictions": report.unmatched_predictions });
    Ok(Report {
        stats,
        inputs: vec![],
        outputs,
        details: Some(details),
    })
}

fn split_key(line: &str, key: &str) -> StageResult<String> {
    let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    let field = v
        .get(key)
        .ok_or_else(|| format!("record has no field {key:?}"))?;
    let field = match field {
        Value::Array(a) => a.first().ok_or_else(|| format!("field {key:?} is empty"))?,
        other => other,
    };
    Ok(match field {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    })
}

/// Two passes over a committed output: assign membership, then stream each
/// record to its side.
fn split_file(ctx: &Ctx, path: &Path, s: &SplitConfig, seed: u64) -> StageResult<Vec<OutputFile>> {
    let lines = || -> StageResult<_> {
        Ok(BufReader::new(File::open(path).map_err(io_err(path))?).lines())
    };
    let assignment = match &s.key {
        None => {
            let mut n = 0;
            for l in lines()? {
                l.map_err(io_err(path))?;
                n += 1;
            }
            split_assignment(n, s.ratio, seed)
        }
        Some(k) => {
            let mut keys = Vec::new();
            for l in lines()? {
                keys.push(split_key(&l.map_err(io_err(path))?, k)?);
            }
            split_assignment_keyed(&keys, s.ratio, seed)
        }
    }
    .map_err(|e| e.to_string())?;
    let train_path = ctx.cfg.output(&s.train);
    let test_path = ctx.cfg.output(&s.test);
    let mut train = AtomicFile::create(&train_path).map_err(io_err(&train_path))?;
    let mut test = AtomicFile::create(&test_path).map_err(io_err(&test_path))?;
    for (l, &is_train) in lines()?.zip(&assignment) {
        let l = l.map_err(io_err(path))?;
        let side = if is_train { &mut train } else { &mut test };
        side.write_line(&l).map_err(|e| e.to_string())?;
    }
    Ok(vec![
        finish(ctx, train, &train_path)?,
        finish(ctx, test, &test_path)?,
    ])
}
