use std::collections::{HashMap, HashSet, VecDeque};

use super::{EntityId, KgError, KnowledgeGraph, Triple};

/// Enclosing subgraph around a target pair `(h, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub center: (EntityId, EntityId),
    pub hop_limit: usize,
    /// Ascending.
    pub entities: Vec<EntityId>,
    /// Ascending; never contains an `(h, ·, t)` triple.
    pub triples: Vec<Triple>,
}

impl Subgraph {
    pub fn contains(&self, e: EntityId) -> bool {
        self.entities.binary_search(&e).is_ok()
    }
}

/// Entities within `k` undirected hops of both `h` and `t`, plus `h` and `t`
/// themselves, with every graph triple between them except those from `h`
/// to `t`.
pub fn enclosing_subgraph(
    kg: &KnowledgeGraph,
    h: &str,
    t: &str,
    k: usize,
) -> Result<Subgraph, KgError> {
    let h = kg.require(h)?;
    let t = kg.require(t)?;
    Ok(enclosing_subgraph_by_id(kg, h, t, k))
}

pub fn enclosing_subgraph_by_id(
    kg: &KnowledgeGraph,
    h: EntityId,
    t: EntityId,
    k: usize,
) -> Subgraph {
    let from_h = k_hop(kg, h, k);
    let from_t = k_hop(kg, t, k);
    let mut entities: Vec<EntityId> = from_h.intersection(&from_t).copied().collect();
    entities.push(h);
    entities.push(t);
    entities.sort_unstable();
    entities.dedup();
    let set: HashSet<EntityId> = entities.iter().copied().collect();
    let mut triples: Vec<Triple> = entities
        .iter()
        .flat_map(|&e| kg.outgoing(e))
        .filter(|tr| set.contains(&tr.t) && !(tr.h == h && tr.t == t))
        .copied()
        .collect();
    triples.sort_unstable();
    Subgraph {
        center: (h, t),
        hop_limit: k,
        entities,
        triples,
    }
}

fn k_hop(kg: &KnowledgeGraph, start: EntityId, k: usize) -> HashSet<EntityId> {
    let mut dist: HashMap<EntityId, usize> = HashMap::new();
    dist.insert(start, 0);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        let d = dist[&a];
        if d == k {
            continue;
        }
        for &b in kg.neighbors(a) {
            if let std::collections::hash_map::Entry::Vacant(v) = dist.entry(b) {
                v.insert(d + 1);
                queue.push_back(b);
            }
        }
    }
    dist.into_keys().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::testing::graph;

    fn names(kg: &KnowledgeGraph, sub: &Subgraph) -> Vec<String> {
        sub.entities
            .iter()
            .map(|e| kg.entity(*e).id.clone())
            .collect()
    }

    #[test]
    fn chain() {
        let kg = graph(
            &[("a", "drug"), ("b", "gene"), ("c", "disease")],
            &[("a", "r", "b"), ("b", "r", "c")],
        );
        let sub = enclosing_subgraph(&kg, "a", "c", 2).unwrap();
        assert_eq!(names(&kg, &sub), ["a", "b", "c"]);
        assert_eq!(sub.triples.len(), 2);
    }

    #[test]
    fn disconnected_pair() {
        let kg = graph(
            &[
                ("a", "drug"),
                ("b", "gene"),
                ("c", "disease"),
                ("d", "gene"),
            ],
            &[("a", "r", "b"), ("c", "r", "d")],
        );
        let sub = enclosing_subgraph(&kg, "a", "c", 2).unwrap();
        assert_eq!(names(&kg, &sub), ["a", "c"]);
        assert!(sub.triples.is_empty());
    }

    #[test]
    fn triangle_masks_target() {
        let kg = graph(
            &[("a", "drug"), ("b", "gene"), ("c", "disease")],
            &[("a", "r", "b"), ("a", "s", "c"), ("c", "s", "b")],
        );
        let sub = enclosing_subgraph(&kg, "a", "b", 1).unwrap();
        assert_eq!(names(&kg, &sub), ["a", "b", "c"]);
        let labels: Vec<_> = sub.triples.iter().map(|t| kg.labels(t)).collect();
        assert_eq!(labels, [("a", "s", "c"), ("c", "s", "b")]);
    }

    #[test]
    fn unknown_entity() {
        let kg = graph(&[("a", "drug")], &[]);
        assert_eq!(
            enclosing_subgraph(&kg, "a", "zz", 2),
            Err(KgError::UnknownEntity("zz".into()))
        );
    }
}
