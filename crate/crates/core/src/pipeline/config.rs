//! Pipeline configuration: one TOML file. Relative input paths resolve
//! against the directory holding the config file; outputs resolve against
//! `output_dir`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::PipelineError;
use crate::chem::FingerprintConfig;
use crate::forge::AnswerVariant;

pub const DEFAULT_CHUNK_SIZE: usize = 1024;

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_chunk() -> usize {
    DEFAULT_CHUNK_SIZE
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// Base seed; every stage and record seed derives from it.
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Template file replacing the shipped wording.
    #[serde(default)]
    pub templates: Option<PathBuf>,
    #[serde(default = "default_chunk")]
    pub chunk_size: usize,
    #[serde(default)]
    pub fingerprint: FingerprintConfig,
    #[serde(default)]
    pub kg: Option<KgSource>,
    #[serde(default, rename = "stage")]
    pub stages: Vec<StageConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KgSource {
    pub triples: PathBuf,
    pub entities: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    pub ratio: f64,
    pub train: PathBuf,
    pub test: PathBuf,
    /// Top-level record field used as the group key; the first element is
    /// used when the field is an array.
    #[serde(default)]
    pub key: Option<String>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    Vs,
    Ddi,
}

/// Pair queries sampled from the graph: every triple with `relation` as a
/// positive plus corrupted negatives.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerateConfig {
    pub relation: String,
    pub kind: PairKind,
    #[serde(default = "one")]
    pub negatives_per_positive: usize,
    #[serde(default)]
    pub limit: Option<usize>,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KgLimits {
    pub hops: Option<usize>,
    pub max_path_len: Option<usize>,
    pub max_paths: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StageConfig {
    Corpus {
        name: Option<String>,
        documents: PathBuf,
        dictionary: PathBuf,
        #[serde(default = "yes")]
        case_insensitive: bool,
        annotations: Option<PathBuf>,
        output: PathBuf,
        split: Option<SplitConfig>,
    },
    KgInstructions {
        name: Option<String>,
        output: PathBuf,
        #[serde(default)]
        answer: AnswerVariant,
        #[serde(default)]
        limits: KgLimits,
        split: Option<SplitConfig>,
    },
    Moltext {
        name: Option<String>,
        input: PathBuf,
        output: PathBuf,
        split: Option<SplitConfig>,
    },
    Synth {
        name: Option<String>,
        properties: PathBuf,
        output: PathBuf,
        split: Option<SplitConfig>,
    },
    Design {
        name: Option<String>,
        input: PathBuf,
        output: PathBuf,
        split: Option<SplitConfig>,
    },
    Queries {
        name: Option<String>,
        input: Option<PathBuf>,
        generate: Option<GenerateConfig>,
        output: PathBuf,
        answer_key: Option<PathBuf>,
        #[serde(default = "yes")]
        context: bool,
        /// Fill yes/no answers on pair queries for training use.
        #[serde(default)]
        labels: bool,
        #[serde(default)]
        limits: KgLimits,
        #[serde(default)]
        extra_properties: Vec<String>,
    },
    Eval {
        name: Option<String>,
        predictions: PathBuf,
        queries: PathBuf,
        output: PathBuf,
        table: Option<PathBuf>,
    },
}

impl StageConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            StageConfig::Corpus { .. } => "corpus",
            StageConfig::KgInstructions { .. } => "kg_instructions",
            StageConfig::Moltext { .. } => "moltext",
            StageConfig::Synth { .. } => "synth",
            StageConfig::Design { .. } => "design",
            StageConfig::Queries { .. } => "queries",
            StageConfig::Eval { .. } => "eval",
        }
    }

    pub fn name(&self, index: usize) -> String {
        let n = match self {
            StageConfig::Corpus { name, .. }
            | StageConfig::KgInstructions { name, .. }
            | StageConfig::Moltext { name, .. }
            | StageConfig::Synth { name, .. }
            | StageConfig::Design { name, .. }
            | StageConfig::Queries { name, .. }
            | StageConfig::Eval { name, .. } => name.clone(),
        };
        n.unwrap_or_else(|| format!("{}-{index}", self.kind()))
    }

    /// `(key, path)` for every input file.
    pub fn inputs(&self) -> Vec<(&'static str, &Path)> {
        match self {
            StageConfig::Corpus {
                documents,
                dictionary,
                annotations,
                ..
            } => {
                let mut v = vec![
                    ("documents", documents.as_path()),
                    ("dictionary", dictionary.as_path()),
                ];
                if let Some(a) = annotations {
                    v.push(("annotations", a.as_path()));
                }
                v
            }
            StageConfig::KgInstructions { .. } => vec![],
            StageConfig::Moltext { input, .. } | StageConfig::Design { input, .. } => {
                vec![("input", input.as_path())]
            }
            StageConfig::Synth { properties, .. } => vec![("properties", properties.as_path())],
            StageConfig::Queries { input, .. } => {
                input.iter().map(|p| ("input", p.as_path())).collect()
            }
            StageConfig::Eval {
                predictions,
                queries,
                ..
            } => {
                vec![
                    ("predictions", predictions.as_path()),
                    ("queries", queries.as_path()),
                ]
            }
        }
    }

    /// `(key, path)` for every output file, relative to the output directory.
    pub fn outputs(&self) -> Vec<(&'static str, &Path)> {
        let mut v = Vec::new();
        let split = match self {
            StageConfig::Corpus { output, split, .. }
            | StageConfig::KgInstructions { output, split, .. }
            | StageConfig::Moltext { output, split, .. }
            | StageConfig::Synth { output, split, .. }
            | StageConfig::Design { output, split, .. } => {
                v.push(("output", output.as_path()));
                split.as_ref()
            }
            StageConfig::Queries {
                output, answer_key, ..
            } => {
                v.push(("output", output.as_path()));
                if let Some(k) = answer_key {
                    v.push(("answer_key", k.as_path()));
                }
                None
            }
            StageConfig::Eval { output, table, .. } => {
                v.push(("output", output.as_path()));
                if let Some(t) = table {
                    v.push(("table", t.as_path()));
                }
                None
            }
        };
        if let Some(s) = split {
            v.push(("split.train", s.train.as_path()));
            v.push(("split.test", s.test.as_path()));
        }
        v
    }

    fn uses_kg(&self) -> bool {
        match self {
            StageConfig::KgInstructions { .. } => true,
            StageConfig::Queries { generate, .. } => generate.is_some(),
            _ => false,
        }
    }
}

fn err(path: impl Into<String>, reason: impl Into<String>) -> PipelineError {
    PipelineError::Config {
        path: path.into(),
        reason: reason.into(),
    }
}

/// A parsed config with its location.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: PipelineConfig,
    pub base_dir: PathBuf,
    /// Exact bytes the config hash covers.
    pub hashed_text: String,
}

impl LoadedConfig {
    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.config.output_dir)
    }

    pub fn output(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.output_dir().join(p)
        }
    }
}

/// Command-line overrides of config keys.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<LoadedConfig, PipelineError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(path.display().to_string(), e.to_string()))?;
    let mut config: PipelineConfig = toml::from_str(&text)
        .map_err(|e| err(path.display().to_string(), e.to_string().trim().to_string()))?;
    let mut hashed_text = text;
    if let Some(s) = overrides.seed {
        config.seed = s;
        hashed_text.push_str(&format!("\n# override seed = {s}\n"));
    }
    if let Some(o) = &overrides.output_dir {
        config.output_dir = o.clone();
        hashed_text.push_str(&format!("\n# override output_dir = {}\n", o.display()));
    }
    let base_dir = path
        .parent()
        .map(|p| {
            if p.as_os_str().is_empty() {
                Path::new(".")
            } else {
                p
            }
        })
        .unwrap_or(Path::new("."))
        .to_path_buf();
    let loaded = LoadedConfig {
        config,
        base_dir,
        hashed_text,
    };
    validate(&loaded)?;
    Ok(loaded)
}

fn validate(l: &LoadedConfig) -> Result<(), PipelineError> {
    let c = &l.config;
    if c.chunk_size == 0 {
        return Err(err("chunk_size", "must be positive"));
    }
    if c.fingerprint.width == 0 || !c.fingerprint.width.is_power_of_two() {
        return Err(err("fingerprint.width", "must be a power of two"));
    }
    if c.stages.is_empty() {
        return Err(err("stage", "no stages declared"));
    }
    if let Some(t) = &c.templates {
        if !l.resolve(t).is_file() {
            return Err(err("templates", format!("file not found: {}", t.display())));
        }
    }
    if let Some(kg) = &c.kg {
        for (key, p) in [("kg.triples", &kg.triples), ("kg.entities", &kg.entities)] {
            if !l.resolve(p).is_file() {
                return Err(err(key, format!("file not found: {}", p.display())));
            }
        }
    }
    let mut produced: HashSet<PathBuf> = HashSet::new();
    let mut names = HashSet::new();
    for (i, s) in c.stages.iter().enumerate() {
        let at = |key: &str| format!("stage[{i}].{key}");
        if !names.insert(s.name(i)) {
            return Err(err(
                at("name"),
                format!("duplicate stage name {:?}", s.name(i)),
            ));
        }
        if s.uses_kg() && c.kg.is_none() {
            return Err(err(at("kind"), "stage needs a [kg] section"));
        }
        for (key, p) in s.inputs() {
            let resolved = l.resolve(p);
            if !resolved.is_file() && !produced.contains(&resolved) {
                return Err(err(at(key), format!("file not found: {}", p.display())));
            }
        }
        match s {
            StageConfig::Queries {
                input, generate, ..
            } => {
                if input.is_some() == generate.is_some() {
                    return Err(err(
                        at("input"),
                        "exactly one of `input` and `generate` is required",
                    ));
                }
            }
            StageConfig::Corpus { split, .. }
            | StageConfig::KgInstructions { split, .. }
            | StageConfig::Moltext { split, .. }
            | StageConfig::Synth { split, .. }
            | StageConfig::Design { split, .. } => {
                if let Some(sp) = split {
                    if !(sp.ratio > 0.0 && sp.ratio < 1.0) {
                        return Err(err(at("split.ratio"), "must lie strictly between 0 and 1"));
                    }
                }
            }
            StageConfig::Eval { .. } => {}
        }
        for (key, p) in s.outputs() {
            if !produced.insert(l.output(p)) {
                return Err(err(
                    at(key),
                    format!("output {} is written twice", p.display()),
                ));
            }
        }
    }
    Ok(())
}
