//! Independent reference implementations used by the oracle tests.

use std::collections::{BTreeSet, HashSet};

use molforge::chem::Fingerprint;
use molforge::kg::{
    enclosing_subgraph_by_id, enumerate_paths_capped, Entity, EntityId, EntityType, Hop, KgBuilder,
    KnowledgeGraph, Path, Triple,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random graph with `2..=max_nodes` entities, up to three relations and a
/// density drawn per graph. Self-loops and duplicates are dropped by the
/// builder.
pub fn random_graph<R: Rng>(rng: &mut R, max_nodes: usize) -> KnowledgeGraph {
    let n = rng.random_range(2..=max_nodes);
    let mut b = KgBuilder::new();
    for i in 0..n {
        b.add_entity(Entity {
            id: format!("e{i}"),
            entity_type: if i % 2 == 0 {
                EntityType::Drug
            } else {
                EntityType::Target
            },
            name: format!("e{i}"),
            smiles: None,
        })
        .unwrap();
    }
    let edges = rng.random_range(0..=2 * n);
    for _ in 0..edges {
        let h = rng.random_range(0..n);
        let t = rng.random_range(0..n);
        let r = ["binds", "treats", "causes"][rng.random_range(0..3)];
        if h != t {
            b.add(&format!("e{h}"), r, &format!("e{t}")).unwrap();
        }
    }
    b.build()
}

/// All-pairs undirected hop distances by Floyd-Warshall.
fn distances(kg: &KnowledgeGraph) -> Vec<Vec<usize>> {
    let n = kg.entity_count();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for t in kg.triples() {
        let (a, b) = (t.h.0 as usize, t.t.0 as usize);
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Entities and triples of the enclosing subgraph by definition.
pub fn brute_subgraph(
    kg: &KnowledgeGraph,
    h: EntityId,
    t: EntityId,
    k: usize,
) -> (Vec<EntityId>, Vec<Triple>) {
    let d = distances(kg);
    let (hi, ti) = (h.0 as usize, t.0 as usize);
    let entities: BTreeSet<EntityId> = (0..kg.entity_count())
        .filter(|&v| (d[hi][v] <= k && d[ti][v] <= k) || v == hi || v == ti)
        .map(|v| EntityId(v as u32))
        .collect();
    let triples: BTreeSet<Triple> = kg
        .triples()
        .iter()
        .filter(|tr| {
            entities.contains(&tr.h) && entities.contains(&tr.t) && !(tr.h == h && tr.t == t)
        })
        .copied()
        .collect();
    (
        entities.into_iter().collect(),
        triples.into_iter().collect(),
    )
}

/// Every simple path from `h` to `t` of 1..=`max_len` hops over `triples`,
/// each triple walkable in both directions. Sorted.
pub fn brute_paths(triples: &[Triple], h: EntityId, t: EntityId, max_len: usize) -> Vec<Path> {
    fn walk(
        triples: &[Triple],
        at: EntityId,
        t: EntityId,
        max_len: usize,
        visited: &mut Vec<EntityId>,
        hops: &mut Vec<Hop>,
        out: &mut Vec<Path>,
    ) {
        if at == t && !hops.is_empty() {
            out.push(Path { hops: hops.clone() });
            return;
        }
        if hops.len() == max_len {
            return;
        }
        for tr in triples {
            for (from, to, forward) in [(tr.h, tr.t, true), (tr.t, tr.h, false)] {
                if from != at || visited.contains(&to) {
                    continue;
                }
                visited.push(to);
                hops.push(Hop {
                    from,
                    to,
                    relation: tr.r,
                    forward,
                });
                walk(triples, to, t, max_len, visited, hops, out);
                hops.pop();
                visited.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(
        triples,
        h,
        t,
        max_len,
        &mut vec![h],
        &mut Vec::new(),
        &mut out,
    );
    out.sort();
    out.dedup();
    out
}

/// The first `cap` paths by (length, lexicographic), returned in
/// lexicographic order, plus whether any were cut.
pub fn brute_capped(all: &[Path], cap: usize) -> (Vec<Path>, bool) {
    let mut by_len = all.to_vec();
    by_len.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    by_len.truncate(cap);
    by_len.sort();
    (by_len, all.len() > cap)
}

/// Pair-counting AUC: concordant pairs plus half the ties over all
/// positive-negative pairs, kept as an exact integer ratio.
pub fn auc_pairs(scores: &[f64], labels: &[bool]) -> f64 {
    let mut twice = 0u64;
    let mut pairs = 0u64;
    for i in 0..scores.len() {
        for j in 0..scores.len() {
            if labels[i] && !labels[j] {
                pairs += 1;
                if scores[i] > scores[j] {
                    twice += 2;
                } else if scores[i] == scores[j] {
                    twice += 1;
                }
            }
        }
    }
    twice as f64 / (2 * pairs) as f64
}

fn tanimoto_sets(a: &Fingerprint, b: &Fingerprint) -> f64 {
    let x: HashSet<usize> = a.on_bits().into_iter().collect();
    let y: HashSet<usize> = b.on_bits().into_iter().collect();
    let union = x.union(&y).count();
    if union == 0 {
        return 1.0;
    }
    x.intersection(&y).count() as f64 / union as f64
}

/// One minus the mean Tanimoto similarity over unordered pairs, by a plain
/// double loop over bit sets.
pub fn brute_diversity(fps: &[Fingerprint]) -> Option<f64> {
    let n = fps.len();
    if n < 2 {
        return None;
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in 0..n {
            if i < j {
                sum += tanimoto_sets(&fps[i], &fps[j]);
                pairs += 1;
            }
        }
    }
    Some(1.0 - sum / pairs as f64)
}

/// Runs the subgraph and path oracles on `graphs` random graphs; returns
/// the number of (graph, pair) cases checked and how many had paths.
pub fn check_kg_oracles(graphs: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut cases, mut with_paths) = (0, 0);
    for g in 0..graphs {
        let kg = random_graph(&mut rng, 12);
        let n = kg.entity_count() as u32;
        for _ in 0..3 {
            let h = EntityId(rng.random_range(0..n));
            let mut t = EntityId(rng.random_range(0..n));
            if t == h {
                t = EntityId((h.0 + 1) % n);
            }
            let k = rng.random_range(1..=3);
            let sub = enclosing_subgraph_by_id(&kg, h, t, k);
            let (ents, triples) = brute_subgraph(&kg, h, t, k);
            assert_eq!(
                sub.entities, ents,
                "graph {g} entities ({h:?}, {t:?}, k={k})"
            );
            assert_eq!(
                sub.triples, triples,
                "graph {g} triples ({h:?}, {t:?}, k={k})"
            );

            let max_len = rng.random_range(0..=4);
            let all = brute_paths(&triples, h, t, max_len);
            let got = enumerate_paths_capped(&sub, h, t, max_len, usize::MAX);
            assert_eq!(
                got.paths, all,
                "graph {g} paths ({h:?}, {t:?}, len<={max_len})"
            );
            assert!(!got.truncated);
            let cap = rng.random_range(1..=6);
            let (kept, cut) = brute_capped(&all, cap);
            let capped = enumerate_paths_capped(&sub, h, t, max_len, cap);
            assert_eq!(capped.paths, kept, "graph {g} capped at {cap}");
            assert_eq!(capped.truncated, cut);
            cases += 1;
            with_paths += usize::from(!all.is_empty());
        }
    }
    (cases, with_paths)
}
