//! Scoring of free-text model outputs: answer parsing, ROC-AUC, R² and
//! molecule-generation metrics.

mod metrics;
mod parse;
mod report;

use thiserror::Error;

pub use metrics::{
    canonical_set, design_metrics, design_metrics_canonical, pairwise_diversity, r_squared,
    roc_auc, DesignMetrics,
};
pub use parse::{extract_smiles, parse_numeric, parse_yesno, YesNo, NO_WORDS, YES_WORDS};
pub use report::{
    evaluate, read_predictions, read_queries, EvalConfig, EvalReport, EvalTask, Metric, Parsed,
    Prediction, Query, TaskReport, DIVERSITY_NOTE,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("LengthMismatch: {0} scores vs {1} labels")]
    LengthMismatch(usize, usize),
    #[error("SingleClassInput: both classes are required")]
    SingleClassInput,
    #[error("DegenerateTarget: actual values are all equal")]
    DegenerateTarget,
    #[error("TooFewPoints: {0} (need at least 2)")]
    TooFewPoints(usize),
    #[error("NonFiniteValue")]
    NonFiniteValue,
    #[error("chem error: {0}")]
    Chem(String),
    #[error("MalformedLine: {file} line {line}: {reason}")]
    MalformedLine {
        file: String,
        line: usize,
        reason: String,
    },
    #[error("MissingTrainingSet: {0}")]
    MissingTrainingSet(String),
    #[error("io error: {0}")]
    Io(String),
}
