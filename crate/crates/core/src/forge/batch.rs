use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ForgeError;

/// Record accounting for one batch: every input is either emitted or
/// skipped under a named reason.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchStats {
    pub records_in: usize,
    pub records_out: usize,
    pub skipped: BTreeMap<String, usize>,
}

impl BatchStats {
    pub fn emitted(&mut self) {
        self.records_in += 1;
        self.records_out += 1;
    }

    pub fn skip(&mut self, reason: &str) {
        self.records_in += 1;
        *self.skipped.entry(reason.to_string()).or_default() += 1;
    }

    /// Counts the outcome of one input.
    pub fn tally<T>(&mut self, result: &Result<T, ForgeError>) {
        match result {
            Ok(_) => self.emitted(),
            Err(e) => self.skip(e.kind()),
        }
    }

    pub fn skipped_total(&self) -> usize {
        self.skipped.values().sum()
    }

    /// out = in - skipped, exactly.
    pub fn reconciles(&self) -> bool {
        self.records_out + self.skipped_total() == self.records_in
    }

    pub fn merge(&mut self, other: &BatchStats) {
        self.records_in += other.records_in;
        self.records_out += other.records_out;
        for (k, v) in &other.skipped {
            *self.skipped.entry(k.clone()).or_default() += v;
        }
    }
}

/// Maps `f` over `items` in parallel; results keep input order regardless of
/// worker count.
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.par_iter().map(f).collect()
}
