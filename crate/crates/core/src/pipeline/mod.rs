//! Declarative pipeline: stages run in order from one TOML config and
//! leave a manifest beside their outputs.

mod config;
pub mod inspect;
mod io;
mod manifest;
mod stages;

use std::path::Path;

use thiserror::Error;

pub use config::{
    load_config, GenerateConfig, KgLimits, KgSource, LoadedConfig, Overrides, PairKind,
    PipelineConfig, SplitConfig, StageConfig, DEFAULT_CHUNK_SIZE,
};
pub use io::{sha256_file, sha256_hex, AtomicFile, LineChunks};
pub use manifest::{FileDigest, Manifest, OutputFile, StageReport};
pub use stages::evaluate_files;

use crate::forge::TemplateSet;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("ConfigError: {path}: {reason}")]
    Config { path: String, reason: String },
    #[error("StageFailure: {stage}: {cause}")]
    Stage { stage: String, cause: String },
    #[error("DataError: {path}: {reason}")]
    Data { path: String, reason: String },
}

impl PipelineError {
    /// 1 for configuration problems, 2 for data problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config { .. } => 1,
            PipelineError::Stage { .. } | PipelineError::Data { .. } => 2,
        }
    }
}

fn write_manifest(dir: &Path, manifest: &Manifest) -> std::io::Result<()> {
    let mut f = AtomicFile::create(&dir.join(MANIFEST_FILE))?;
    f.write_all(serde_json::to_string_pretty(manifest)?.as_bytes())?;
    f.write_all(b"\n")?;
    f.commit().map(|_| ())
}

/// Runs every stage of the config in order. On a stage failure the outputs
/// of earlier stages stay in place and the manifest records the failure.
pub fn run(config_path: &Path, overrides: &Overrides) -> Result<Manifest, PipelineError> {
    let loaded = load_config(config_path, overrides)?;
    let templates = match &loaded.config.templates {
        Some(p) => TemplateSet::load(&loaded.resolve(p)).map_err(|e| PipelineError::Config {
            path: "templates".into(),
            reason: e.to_string(),
        })?,
        None => TemplateSet::default(),
    };
    let out_dir = loaded.output_dir();
    let mut manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config_hash: sha256_hex(loaded.hashed_text.as_bytes()),
        seed: loaded.config.seed,
        template_version: templates.version,
        stages: Vec::new(),
        failed: None,
    };
    let mut ctx = stages::Ctx::new(&loaded, templates);
    for (i, stage) in loaded.config.stages.iter().enumerate() {
        let name = stage.name(i);
        log::info!("stage {name} ({})", stage.kind());
        match stages::run_stage(&mut ctx, i, stage) {
            Ok(report) => {
                log::info!(
                    "stage {name}: {} in, {} out, {} skipped",
                    report.records_in,
                    report.records_out,
                    report.skipped.values().sum::<usize>()
                );
                manifest.stages.push(report);
            }
            Err(cause) => {
                manifest.failed = Some(name.clone());
                if let Err(e) = write_manifest(&out_dir, &manifest) {
                    log::warn!("could not write manifest: {e}");
                }
                return Err(PipelineError::Stage { stage: name, cause });
            }
        }
    }
    write_manifest(&out_dir, &manifest).map_err(|e| PipelineError::Stage {
        stage: "manifest".into(),
        cause: e.to_string(),
    })?;
    Ok(manifest)
}
