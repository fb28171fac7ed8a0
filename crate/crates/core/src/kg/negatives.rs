use std::collections::HashSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{KgError, KnowledgeGraph, Triple};

/// Rejection-sampling attempts per negative before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

/// Corrupts each positive `per_positive` times, replacing the tail on even
/// draws and the head on odd draws with a uniformly chosen entity of the
/// same type. Candidates already in the graph or among the positives are
/// rejected.
pub fn sample_negatives(
    kg: &KnowledgeGraph,
    positives: &[Triple],
    per_positive: usize,
    seed: u64,
) -> Result<Vec<Triple>, KgError> {
    if positives.is_empty() {
        return Err(KgError::EmptyPositives);
    }
    let positive_set: HashSet<Triple> = positives.iter().copied().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(positives.len() * per_positive);
    for p in positives {
        for j in 0..per_positive {
            let corrupt_tail = j % 2 == 0;
            let replaced = if corrupt_tail { p.t } else { p.h };
            let pool = kg.entities_of_type(&kg.entity(replaced).entity_type);
            let mut found = None;
            for _ in 0..MAX_ATTEMPTS {
                let e = pool[rng.random_range(0..pool.len())];
                let cand = if corrupt_tail {
                    Triple { t: e, ..*p }
                } else {
                    Triple { h: e, ..*p }
                };
                if cand.h != cand.t && !kg.contains(&cand) && !positive_set.contains(&cand) {
                    found = Some(cand);
                    break;
                }
            }
            match found {
                Some(c) => out.push(c),
                None => {
                    let (h, r, t) = kg.labels(p);
                    return Err(KgError::ExhaustedSampleSpace {
                        h: h.to_string(),
                        r: r.to_string(),
                        t: t.to_string(),
                    });
                }
            }
        }
    }
    Ok(out)
}
