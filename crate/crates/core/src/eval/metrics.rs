use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::chem::{self, morgan_fingerprint, tanimoto, Fingerprint, FingerprintConfig};

/// Area under the ROC curve in the Mann-Whitney form: the fraction of
/// positive-negative pairs ranked correctly, ties counting one half.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<f64, EvalError> {
    if scores.len() != labels.len() {
        return Err(EvalError::LengthMismatch(scores.len(), labels.len()));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(EvalError::NonFiniteValue);
    }
    let n_pos = labels.iter().filter(|&&l| l).count() as u64;
    let n_neg = labels.len() as u64 - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::SingleClassInput);
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Twice the Mann-Whitney U, kept integral.
    let mut u2: u64 = 0;
    let mut neg_below: u64 = 0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j < order.len() && scores[order[j]] == scores[order[i]] {
            j += 1;
        }
        let pos = order[i..j].iter().filter(|&&k| labels[k]).count() as u64;
        let neg = (j - i) as u64 - pos;
        u2 += pos * (2 * neg_below + neg);
        neg_below += neg;
        i = j;
    }
    Ok(u2 as f64 / (2 * n_pos * n_neg) as f64)
}

/// Coefficient of determination, 1 - SS_res / SS_tot.
pub fn r_squared(pred: &[f64], actual: &[f64]) -> Result<f64, EvalError> {
    if pred.len() != actual.len() {
        return Err(EvalError::LengthMismatch(pred.len(), actual.len()));
    }
    if actual.len() < 2 {
        return Err(EvalError::TooFewPoints(actual.len()));
    }
    if pred.iter().chain(actual).any(|v| !v.is_finite()) {
        return Err(EvalError::NonFiniteValue);
    }
    let mean = actual.iter().sum::<f64>() / actual.len() as f64;
    let ss_tot: f64 = actual.iter().map(|a| (a - mean) * (a - mean)).sum();
    if ss_tot == 0.0 {
        return Err(EvalError::DegenerateTarget);
    }
    let ss_res: f64 = pred
        .iter()
        .zip(actual)
        .map(|(p, a)| (a - p) * (a - p))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignMetrics {
    pub n_generated: usize,
    pub n_valid: usize,
    pub n_distinct: usize,
    /// n_valid / n_generated.
    pub valid: f64,
    /// Distinct canonical forms / n_valid.
    pub unique: f64,
    /// Distinct canonical forms absent from the training set / distinct.
    pub novelty: f64,
    /// One minus the mean pairwise Tanimoto similarity over distinct valid
    /// molecules; absent with fewer than two.
    pub diversity: Option<f64>,
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Canonical forms of the valid entries; invalid ones are dropped.
pub fn canonical_set<'a, I: IntoIterator<Item = &'a str>>(smiles: I) -> HashSet<String> {
    smiles
        .into_iter()
        .filter_map(|s| chem::parse_valid(s).ok())
        .filter_map(|m| chem::canonical_smiles(&m).ok())
        .collect()
}

/// 1 - (2 / (n (n - 1))) * sum over i < j of Tanimoto(fp_i, fp_j).
pub fn pairwise_diversity(fps: &[Fingerprint]) -> Option<f64> {
    let n = fps.len();
    if n < 2 {
        return None;
    }
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut s = 0.0;
            for j in i + 1..n {
                s += tanimoto(&fps[i], &fps[j]).expect("fingerprints share a width");
            }
            s
        })
        .collect();
    let total: f64 = rows.iter().sum();
    Some(1.0 - 2.0 * total / (n as f64 * (n as f64 - 1.0)))
}

/// Valid, unique, novelty and diversity of generated molecules. The
/// training set holds canonical SMILES (see [`canonical_set`]). Fractions
/// with an empty denominator are 0.
pub fn design_metrics(
    generated: &[String],
    training_set: &HashSet<String>,
    fp: &FingerprintConfig,
) -> Result<DesignMetrics, EvalError> {
    let valid: Vec<Option<String>> = generated
        .par_iter()
        .map(|s| {
            chem::parse_valid(s)
                .ok()
                .and_then(|m| chem::canonical_smiles(&m).ok())
        })
        .collect();
    design_metrics_canonical(
        generated.len(),
        valid.into_iter().flatten().collect(),
        training_set,
        fp,
    )
}

/// As [`design_metrics`], from the canonical forms of the valid generations
/// and the total number generated.
pub fn design_metrics_canonical(
    n_generated: usize,
    valid_canonical: Vec<String>,
    training_set: &HashSet<String>,
    fp: &FingerprintConfig,
) -> Result<DesignMetrics, EvalError> {
    let n_valid = valid_canonical.len();
    let mut seen = HashSet::new();
    let distinct: Vec<String> = valid_canonical
        .into_iter()
        .filter(|c| seen.insert(c.clone()))
        .collect();
    let novel = distinct
        .iter()
        .filter(|c| !training_set.contains(*c))
        .count();
    let fps = distinct
        .par_iter()
        .map(|c| {
            let m = chem::parse_smiles(c).map_err(|e| EvalError::Chem(e.to_string()))?;
            morgan_fingerprint(&m, fp.radius, fp.width).map_err(|e| EvalError::Chem(e.to_string()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DesignMetrics {
        n_generated,
        n_valid,
        n_distinct: distinct.len(),
        valid: ratio(n_valid, n_generated),
        unique: ratio(distinct.len(), n_valid),
        novelty: ratio(novel, distinct.len()),
        diversity: pairwise_diversity(&fps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn auc_hand_cases() {
        assert_eq!(
            roc_auc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap(),
            0.75
        );
        assert_eq!(roc_auc(&[0.0, 1.0], &[false, true]).unwrap(), 1.0);
        assert_eq!(
            roc_auc(&[0.3; 4], &[false, true, false, true]).unwrap(),
            0.5
        );
        assert_eq!(
            roc_auc(&[0.3, 0.2], &[true, true]),
            Err(EvalError::SingleClassInput)
        );
    }

    #[test]
    fn r2_hand_cases() {
        assert_eq!(r_squared(&[1.0, 2.0, 4.0], &[1.0, 2.0, 4.0]).unwrap(), 1.0);
        let mean = 7.0 / 3.0;
        assert!(r_squared(&[mean; 3], &[1.0, 2.0, 4.0]).unwrap().abs() < 1e-15);
        assert!((r_squared(&[1.0, 2.0, 3.0], &[1.0, 2.0, 4.0]).unwrap() - 0.785714).abs() < 1e-6);
        assert_eq!(
            r_squared(&[1.0, 2.0], &[3.0, 3.0]),
            Err(EvalError::DegenerateTarget)
        );
    }

    #[test]
    fn design_degenerate() {
        let fp = FingerprintConfig::default();
        let gen: Vec<String> = vec!["CCO".into(), "OCC".into(), "C(O)C".into()];
        let m = design_metrics(&gen, &canonical_set(["CCO"]), &fp).unwrap();
        assert_eq!(m.valid, 1.0);
        assert!((m.unique - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.novelty, 0.0);
        assert_eq!(m.diversity, None);
        let m = design_metrics(&["C1CC".to_string()], &HashSet::new(), &fp).unwrap();
        assert_eq!(
            (m.valid, m.unique, m.novelty, m.diversity),
            (0.0, 0.0, 0.0, None)
        );
    }

    #[test]
    fn two_molecules_diversity() {
        let fp = FingerprintConfig::default();
        let gen = vec!["CCO".to_string(), "c1ccccc1".to_string()];
        let m = design_metrics(&gen, &HashSet::new(), &fp).unwrap();
        let a =
            morgan_fingerprint(&chem::parse_smiles("CCO").unwrap(), fp.radius, fp.width).unwrap();
        let b = morgan_fingerprint(
            &chem::parse_smiles("c1ccccc1").unwrap(),
            fp.radius,
            fp.width,
        )
        .unwrap();
        assert_eq!(m.diversity, Some(1.0 - tanimoto(&a, &b).unwrap()));
        assert_eq!(m.novelty, 1.0);
    }
}
