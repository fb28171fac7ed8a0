use std::collections::HashMap;
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::CorpusError;

fn check(ratio: f64) -> Result<(), CorpusError> {
    if ratio > 0.0 && ratio < 1.0 {
        Ok(())
    } else {
        Err(CorpusError::InvalidRatio(ratio))
    }
}

/// Train membership for `n` records: a seeded shuffle, with the first
/// `round(ratio * n)` shuffled positions going to train.
pub fn split_assignment(n: usize, ratio: f64, seed: u64) -> Result<Vec<bool>, CorpusError> {
    check(ratio)?;
    let n_train = (ratio * n as f64).round() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut train = vec![false; n];
    for &i in &order[..n_train] {
        train[i] = true;
    }
    Ok(train)
}

/// Grouped membership: records sharing a key always land on the same side.
/// Groups are shuffled with the seed and each is assigned to train when
/// that moves the train size closer to `ratio * n`; with large groups the
/// achieved ratio can differ from the target by more than one record.
pub fn split_assignment_keyed<K: Hash + Eq>(
    keys: &[K],
    ratio: f64,
    seed: u64,
) -> Result<Vec<bool>, CorpusError> {
    check(ratio)?;
    let target = ratio * keys.len() as f64;
    let mut group_of: HashMap<&K, usize> = HashMap::new();
    let mut sizes: Vec<usize> = Vec::new();
    let member: Vec<usize> = keys
        .iter()
        .map(|k| {
            *group_of.entry(k).or_insert_with(|| {
                sizes.push(0);
                sizes.len() - 1
            })
        })
        .collect();
    for &g in &member {
        sizes[g] += 1;
    }
    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut in_train = vec![false; sizes.len()];
    let mut n_train = 0usize;
    for g in order {
        let with = (n_train + sizes[g]) as f64;
        if (with - target).abs() < (n_train as f64 - target).abs() {
            in_train[g] = true;
            n_train += sizes[g];
        }
    }
    Ok(member.into_iter().map(|g| in_train[g]).collect())
}

fn partition<T>(records: Vec<T>, train: &[bool]) -> (Vec<T>, Vec<T>) {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (r, &t) in records.into_iter().zip(train) {
        if t {
            a.push(r);
        } else {
            b.push(r);
        }
    }
    (a, b)
}

/// Splits records into (train, test); both sides keep input order.
pub fn split_records<T>(
    records: Vec<T>,
    ratio: f64,
    seed: u64,
) -> Result<(Vec<T>, Vec<T>), CorpusError> {
    let train = split_assignment(records.len(), ratio, seed)?;
    Ok(partition(records, &train))
}

/// Grouped variant of [`split_records`]; see [`split_assignment_keyed`].
pub fn split_records_keyed<T, K, F>(
    records: Vec<T>,
    ratio: f64,
    seed: u64,
    key: F,
) -> Result<(Vec<T>, Vec<T>), CorpusError>
where
    K: Hash + Eq,
    F: Fn(&T) -> K,
{
    let keys: Vec<K> = records.iter().map(key).collect();
    let train = split_assignment_keyed(&keys, ratio, seed)?;
    Ok(partition(records, &train))
}
