use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFile {
    pub path: String,
    pub records: usize,
}

/// Accounting for one stage: every input record is emitted or skipped
/// under a named reason.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub name: String,
    pub kind: String,
    pub seed: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<OutputFile>,
    pub records_in: usize,
    pub records_out: usize,
    pub skipped: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub details: Option<serde_json::Value>,
}

impl StageReport {
    pub fn reconciles(&self) -> bool {
        self.records_out + self.skipped.values().sum::<usize>() == self.records_in
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub config_hash: String,
    pub seed: u64,
    pub template_version: u32,
    pub stages: Vec<StageReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed: Option<String>,
}
