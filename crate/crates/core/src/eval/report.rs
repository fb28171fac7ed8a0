use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use super::metrics::{design_metrics_canonical, r_squared, roc_auc};
use super::parse::{extract_smiles, parse_numeric, parse_yesno, YesNo};
use super::EvalError;
use crate::chem::{self, FingerprintConfig};

pub const DIVERSITY_NOTE: &str =
    "diversity averages Tanimoto similarity over unordered pairs i<j of distinct valid molecules";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalTask {
    #[serde(alias = "vs_query")]
    Vs,
    #[serde(alias = "ddi_query")]
    Ddi,
    #[serde(alias = "prop_query")]
    Property,
    Design,
}

impl EvalTask {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalTask::Vs => "vs",
            EvalTask::Ddi => "ddi",
            EvalTask::Property => "property",
            EvalTask::Design => "design",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub query_id: String,
    pub raw_text: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
enum LabelValue {
    Flag(bool),
    Int(i64),
    Text(String),
}

impl LabelValue {
    fn to_bool(&self) -> Option<bool> {
        match self {
            LabelValue::Flag(b) => Some(*b),
            LabelValue::Int(0) => Some(false),
            LabelValue::Int(1) => Some(true),
            LabelValue::Text(s) => match s.to_ascii_lowercase().as_str() {
                "yes" | "true" | "1" => Some(true),
                "no" | "false" | "0" => Some(false),
                _ => None,
            },
            LabelValue::Int(_) => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuery {
    query_id: String,
    task: EvalTask,
    #[serde(default)]
    label: Option<LabelValue>,
    #[serde(default)]
    target_value: Option<f64>,
    #[serde(default)]
    property: Option<String>,
    #[serde(default)]
    training_set_ref: Option<String>,
}

/// Answer key for one query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub query_id: String,
    pub task: EvalTask,
    pub label: Option<bool>,
    pub target_value: Option<f64>,
    pub property: Option<String>,
    pub training_set_ref: Option<String>,
}

/// Parsed form of a model output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Parsed {
    YesNo(YesNo),
    Numeric(f64),
    Smiles(Vec<String>),
    Unknown,
}

fn malformed(file: &str, line: usize, reason: impl Into<String>) -> EvalError {
    EvalError::MalformedLine {
        file: file.to_string(),
        line,
        reason: reason.into(),
    }
}

fn jsonl<R: BufRead, T: for<'de> Deserialize<'de>>(
    reader: R,
    file: &str,
) -> Result<Vec<(usize, T)>, EvalError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| EvalError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        let v = serde_json::from_str(&line).map_err(|e| malformed(file, i + 1, e.to_string()))?;
        out.push((i + 1, v));
    }
    Ok(out)
}

pub fn read_predictions<R: BufRead>(reader: R, file: &str) -> Result<Vec<Prediction>, EvalError> {
    Ok(jsonl(reader, file)?.into_iter().map(|(_, p)| p).collect())
}

/// Reads and validates an answer key: pair tasks need a label, property
/// queries a finite target value.
pub fn read_queries<R: BufRead>(reader: R, file: &str) -> Result<Vec<Query>, EvalError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (line, raw) in jsonl::<_, RawQuery>(reader, file)? {
        if !seen.insert(raw.query_id.clone()) {
            return Err(malformed(
                file,
                line,
                format!("duplicate query_id {:?}", raw.query_id),
            ));
        }
        let label =
            match &raw.label {
                None => None,
                Some(l) => Some(l.to_bool().ok_or_else(|| {
                    malformed(file, line, "label must be yes/no, true/false or 0/1")
                })?),
            };
        match raw.task {
            EvalTask::Vs | EvalTask::Ddi if label.is_none() => {
                return Err(malformed(file, line, "missing label"));
            }
            EvalTask::Property if !raw.target_value.is_some_and(f64::is_finite) => {
                return Err(malformed(file, line, "missing or non-finite target_value"));
            }
            _ => {}
        }
        out.push(Query {
            query_id: raw.query_id,
            task: raw.task,
            label,
            target_value: raw.target_value,
            property: raw.property,
            training_set_ref: raw.training_set_ref,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub name: String,
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Metric {
    fn of(name: &str, value: Result<f64, EvalError>) -> Metric {
        match value {
            Ok(v) => Metric {
                name: name.into(),
                value: Some(v),
                note: None,
            },
            Err(e) => Metric {
                name: name.into(),
                value: None,
                note: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskReport {
    pub task: EvalTask,
    /// Property name for property tasks, training-set reference for design.
    pub group: Option<String>,
    pub n_queries: usize,
    /// Queries with a prediction whose answer parsed.
    pub n_parsed: usize,
    pub parse_failures: usize,
    pub missing_predictions: usize,
    pub metrics: Vec<Metric>,
}

impl TaskReport {
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics
            .iter()
            .find(|m| m.name == name)
            .and_then(|m| m.value)
    }

    pub fn reconciles(&self) -> bool {
        self.n_parsed + self.parse_failures + self.missing_predictions == self.n_queries
    }
}

/// Conventions used to compute the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub fingerprint: FingerprintConfig,
    pub yes_words: Vec<String>,
    pub no_words: Vec<String>,
    pub yesno_scores: String,
    pub diversity_population: String,
    pub diversity_pairs: String,
    pub numeric_rule: String,
}

impl EvalConfig {
    pub fn new(fingerprint: FingerprintConfig) -> EvalConfig {
        EvalConfig {
            fingerprint,
            yes_words: super::YES_WORDS.iter().map(|s| s.to_string()).collect(),
            no_words: super::NO_WORDS.iter().map(|s| s.to_string()).collect(),
            yesno_scores: "yes=1, no=0, unknown=0.5 (unknown counts as a parse failure)".into(),
            diversity_population: "distinct valid molecules by canonical SMILES".into(),
            diversity_pairs: "i<j".into(),
            numeric_rule: "number nearest to the property name, else the first number".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub tasks: Vec<TaskReport>,
    /// Predictions whose query id is unknown or repeated.
    pub unmatched_predictions: usize,
    pub datasets: Vec<String>,
    pub config: EvalConfig,
}

impl EvalReport {
    pub fn task(&self, task: EvalTask, group: Option<&str>) -> Option<&TaskReport> {
        self.tasks
            .iter()
            .find(|t| t.task == task && t.group.as_deref() == group)
    }

    /// Plain-text table with one block per task group.
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<10} {:<16} {:>7} {:>7} {:>8} {:>7}  {:<10} {:>10}",
            "task", "group", "queries", "parsed", "failures", "missing", "metric", "value"
        );
        for t in &self.tasks {
            for (k, m) in t.metrics.iter().enumerate() {
                let value = match m.value {
                    Some(v) => format!("{v:.6}"),
                    None => "n/a".into(),
                };
                if k == 0 {
                    let _ = write!(
                        s,
                        "{:<10} {:<16} {:>7} {:>7} {:>8} {:>7}",
                        t.task.as_str(),
                        t.group.as_deref().unwrap_or("-"),
                        t.n_queries,
                        t.n_parsed,
                        t.parse_failures,
                        t.missing_predictions
                    );
                } else {
                    let _ = write!(
                        s,
                        "{:<10} {:<16} {:>7} {:>7} {:>8} {:>7}",
                        "", "", "", "", "", ""
                    );
                }
                let _ = write!(s, "  {:<10} {:>10}", m.name, value);
                if let Some(n) = &m.note {
                    let _ = write!(s, "  ({n})");
                }
                s.push('\n');
            }
        }
        if self.unmatched_predictions > 0 {
            let _ = writeln!(s, "unmatched predictions: {}", self.unmatched_predictions);
        }
        let _ = writeln!(s, "note: {DIVERSITY_NOTE}");
        s
    }
}

#[derive(Default)]
struct Group<'a> {
    queries: Vec<(&'a Query, Option<&'a Prediction>)>,
}

/// Joins predictions to queries and computes per-task metrics. Design
/// groups resolve their training set through `training_set`.
pub fn evaluate(
    predictions: &[Prediction],
    queries: &[Query],
    training_set: &dyn Fn(&str) -> Result<HashSet<String>, EvalError>,
    fp: &FingerprintConfig,
) -> Result<EvalReport, EvalError> {
    let known: HashSet<&str> = queries.iter().map(|q| q.query_id.as_str()).collect();
    let mut by_id: HashMap<&str, &Prediction> = HashMap::new();
    let mut unmatched = 0;
    for p in predictions {
        if !known.contains(p.query_id.as_str()) || by_id.contains_key(p.query_id.as_str()) {
            unmatched += 1;
            continue;
        }
        by_id.insert(&p.query_id, p);
    }
    let mut groups: BTreeMap<(EvalTask, Option<String>), Group> = BTreeMap::new();
    for q in queries {
        let group = match q.task {
            EvalTask::Vs | EvalTask::Ddi => None,
            EvalTask::Property => Some(q.property.clone().unwrap_or_else(|| "value".into())),
            EvalTask::Design => q.training_set_ref.clone(),
        };
        groups
            .entry((q.task, group))
            .or_default()
            .queries
            .push((q, by_id.get(q.query_id.as_str()).copied()));
    }
    let mut tasks = Vec::with_capacity(groups.len());
    for ((task, group), g) in groups {
        let n_queries = g.queries.len();
        let answered: Vec<(&Query, &Prediction)> = g
            .queries
            .iter()
            .filter_map(|(q, p)| p.map(|p| (*q, p)))
            .collect();
        let missing = n_queries - answered.len();
        let (failures, metrics) = match task {
            EvalTask::Vs | EvalTask::Ddi => {
                let parsed: Vec<YesNo> = answered
                    .iter()
                    .map(|(_, p)| parse_yesno(&p.raw_text))
                    .collect();
                let labels: Vec<bool> = answered
                    .iter()
                    .map(|(q, _)| q.label.unwrap_or(false))
                    .collect();
                let scores: Vec<f64> = parsed.iter().map(|y| y.score()).collect();
                let failures = parsed.iter().filter(|y| **y == YesNo::Unknown).count();
                let correct = parsed
                    .iter()
                    .zip(&labels)
                    .filter(|(y, l)| (**y == YesNo::Yes) == **l && **y != YesNo::Unknown)
                    .count();
                let accuracy = if answered.is_empty() {
                    Err(EvalError::TooFewPoints(0))
                } else {
                    Ok(correct as f64 / answered.len() as f64)
                };
                (
                    failures,
                    vec![
                        Metric::of("roc_auc", roc_auc(&scores, &labels)),
                        Metric::of("accuracy", accuracy),
                    ],
                )
            }
            EvalTask::Property => {
                let name = group.clone().unwrap_or_default();
                let mut pred = Vec::new();
                let mut actual = Vec::new();
                for (q, p) in &answered {
                    if let Some(v) = parse_numeric(&p.raw_text, &name) {
                        pred.push(v);
                        actual.push(q.target_value.unwrap_or(f64::NAN));
                    }
                }
                (
                    answered.len() - pred.len(),
                    vec![Metric::of("r2", r_squared(&pred, &actual))],
                )
            }
            EvalTask::Design => {
                let train = match &group {
                    Some(r) => training_set(r)?,
                    None => HashSet::new(),
                };
                let mut canon = Vec::new();
                let mut failures = 0;
                for (_, p) in &answered {
                    let first = extract_smiles(&p.raw_text).into_iter().next();
                    match first
                        .and_then(|s| chem::parse_valid(&s).ok())
                        .and_then(|m| chem::canonical_smiles(&m).ok())
                    {
                        Some(c) => canon.push(c),
                        None => failures += 1,
                    }
                }
                let m = design_metrics_canonical(answered.len(), canon, &train, fp)?;
                let diversity = match m.diversity {
                    Some(d) => Metric::of("diversity", Ok(d)),
                    None => Metric {
                        name: "diversity".into(),
                        value: None,
                        note: Some("fewer than two distinct valid molecules".into()),
                    },
                };
                (
                    failures,
                    vec![
                        Metric::of("valid", Ok(m.valid)),
                        Metric::of("unique", Ok(m.unique)),
                        Metric::of("novelty", Ok(m.novelty)),
                        diversity,
                    ],
                )
            }
        };
        tasks.push(TaskReport {
            task,
            group,
            n_queries,
            n_parsed: answered.len() - failures,
            parse_failures: failures,
            missing_predictions: missing,
            metrics,
        });
    }
    Ok(EvalReport {
        tasks,
        unmatched_predictions: unmatched,
        datasets: Vec::new(),
        config: EvalConfig::new(*fp),
    })
}
