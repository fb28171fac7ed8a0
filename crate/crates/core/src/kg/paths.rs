use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};

use super::{EntityId, RelationId, Subgraph, Triple};

/// Maximum number of paths kept per fact.
pub const DEFAULT_MAX_PATHS: usize = 64;

/// One traversal step. `forward` is true when the underlying triple is
/// `(from, relation, to)` and false when it is `(to, relation, from)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hop {
    pub from: EntityId,
    pub to: EntityId,
    pub relation: RelationId,
    pub forward: bool,
}

impl Hop {
    pub fn triple(&self) -> Triple {
        if self.forward {
            Triple {
                h: self.from,
                r: self.relation,
                t: self.to,
            }
        } else {
            Triple {
                h: self.to,
                r: self.relation,
                t: self.from,
            }
        }
    }
}

/// A simple path; paths order lexicographically by hop sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub hops: Vec<Hop>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.hops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hops.is_empty()
    }

    /// Visited entities, start to end.
    pub fn entities(&self) -> Vec<EntityId> {
        let mut out = Vec::with_capacity(self.hops.len() + 1);
        if let Some(first) = self.hops.first() {
            out.push(first.from);
        }
        out.extend(self.hops.iter().map(|h| h.to));
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PathSet {
    pub paths: Vec<Path>,
    /// More paths existed than the cap allowed.
    pub truncated: bool,
}

/// All simple paths from `h` to `t` with at most `max_len` hops, edges
/// traversable both ways, capped at [`DEFAULT_MAX_PATHS`].
pub fn enumerate_paths(sub: &Subgraph, h: EntityId, t: EntityId, max_len: usize) -> PathSet {
    enumerate_paths_capped(sub, h, t, max_len, DEFAULT_MAX_PATHS)
}

/// Like [`enumerate_paths`] with an explicit cap. When more than `cap` paths
/// exist, shorter paths are kept first, and lexicographically smaller ones
/// among paths of equal length. The result is in lexicographic order.
pub fn enumerate_paths_capped(
    sub: &Subgraph,
    h: EntityId,
    t: EntityId,
    max_len: usize,
    cap: usize,
) -> PathSet {
    let mut out = PathSet::default();
    if h == t || !sub.contains(h) || !sub.contains(t) || max_len == 0 {
        return out;
    }
    let mut adj: BTreeMap<EntityId, Vec<Hop>> = BTreeMap::new();
    for tr in &sub.triples {
        adj.entry(tr.h).or_default().push(Hop {
            from: tr.h,
            to: tr.t,
            relation: tr.r,
            forward: true,
        });
        adj.entry(tr.t).or_default().push(Hop {
            from: tr.t,
            to: tr.h,
            relation: tr.r,
            forward: false,
        });
    }
    for hops in adj.values_mut() {
        hops.sort_unstable();
    }
    let dist = distances_to(&adj, t);
    if !dist.contains_key(&h) {
        return out;
    }
    let mut search = Search {
        adj: &adj,
        dist: &dist,
        t,
        cap,
        visited: HashSet::from([h]),
        stack: Vec::new(),
        found: Vec::new(),
        truncated: false,
    };
    for len in 1..=max_len {
        search.walk(h, len);
        if search.truncated {
            break;
        }
    }
    out.truncated = search.truncated;
    out.paths = search.found;
    out.paths.sort();
    out
}

struct Search<'a> {
    adj: &'a BTreeMap<EntityId, Vec<Hop>>,
    dist: &'a HashMap<EntityId, usize>,
    t: EntityId,
    cap: usize,
    visited: HashSet<EntityId>,
    stack: Vec<Hop>,
    found: Vec<Path>,
    truncated: bool,
}

impl Search<'_> {
    /// Extends the current prefix from `at` by exactly `remaining` hops.
    fn walk(&mut self, at: EntityId, remaining: usize) {
        let Some(hops) = self.adj.get(&at) else {
            return;
        };
        for hop in hops {
            if self.truncated {
                return;
            }
            if hop.to == self.t {
                if remaining == 1 {
                    if self.found.len() == self.cap {
                        self.truncated = true;
                        return;
                    }
                    self.stack.push(*hop);
                    self.found.push(Path {
                        hops: self.stack.clone(),
                    });
                    self.stack.pop();
                }
                continue;
            }
            if remaining < 2 || self.visited.contains(&hop.to) {
                continue;
            }
            match self.dist.get(&hop.to) {
                Some(&d) if d < remaining => {}
                _ => continue,
            }
            self.visited.insert(hop.to);
            self.stack.push(*hop);
            self.walk(hop.to, remaining - 1);
            self.stack.pop();
            self.visited.remove(&hop.to);
        }
    }
}

fn distances_to(adj: &BTreeMap<EntityId, Vec<Hop>>, t: EntityId) -> HashMap<EntityId, usize> {
    let mut dist = HashMap::from([(t, 0usize)]);
    let mut queue = VecDeque::from([t]);
    while let Some(a) = queue.pop_front() {
        let d = dist[&a];
        for hop in adj.get(&a).into_iter().flatten() {
            if let std::collections::hash_map::Entry::Vacant(v) = dist.entry(hop.to) {
                v.insert(d + 1);
                queue.push_back(hop.to);
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::testing::graph;
    use crate::kg::{enclosing_subgraph, KnowledgeGraph};

    fn paths(kg: &KnowledgeGraph, h: &str, t: &str, k: usize, max_len: usize) -> Vec<Vec<String>> {
        let sub = enclosing_subgraph(kg, h, t, k).unwrap();
        let (hi, ti) = (kg.entity_id(h).unwrap(), kg.entity_id(t).unwrap());
        enumerate_paths(&sub, hi, ti, max_len)
            .paths
            .iter()
            .map(|p| {
                p.entities()
                    .iter()
                    .map(|e| kg.entity(*e).id.clone())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn chain_has_one_path() {
        let kg = graph(
            &[("a", "drug"), ("b", "gene"), ("c", "disease")],
            &[("a", "r", "b"), ("b", "r", "c")],
        );
        assert_eq!(paths(&kg, "a", "c", 2, 3), [["a", "b", "c"]]);
        assert!(paths(&kg, "a", "c", 2, 0).is_empty());
    }

    #[test]
    fn diamond_has_two_paths() {
        let kg = graph(
            &[
                ("a", "drug"),
                ("b", "gene"),
                ("c", "gene"),
                ("d", "disease"),
            ],
            &[
                ("a", "r", "b"),
                ("b", "r", "d"),
                ("a", "r", "c"),
                ("c", "r", "d"),
            ],
        );
        assert_eq!(
            paths(&kg, "a", "d", 2, 2),
            [["a", "b", "d"], ["a", "c", "d"]]
        );
    }

    #[test]
    fn reverse_hops_are_flagged() {
        let kg = graph(
            &[("a", "drug"), ("b", "disease"), ("c", "gene")],
            &[("a", "treats", "b"), ("c", "regulates", "b")],
        );
        let sub = enclosing_subgraph(&kg, "a", "c", 2).unwrap();
        let set = enumerate_paths(
            &sub,
            kg.entity_id("a").unwrap(),
            kg.entity_id("c").unwrap(),
            3,
        );
        let flags: Vec<bool> = set.paths[0].hops.iter().map(|h| h.forward).collect();
        assert_eq!(flags, [true, false]);
    }

    #[test]
    fn cap_keeps_shortest_and_flags() {
        let kg = graph(
            &[
                ("a", "drug"),
                ("b", "gene"),
                ("c", "gene"),
                ("d", "disease"),
            ],
            &[
                ("a", "r", "d"),
                ("a", "r", "b"),
                ("b", "r", "d"),
                ("a", "r", "c"),
                ("c", "r", "d"),
            ],
        );
        let sub = crate::kg::enclosing_subgraph_by_id(&kg, EntityId(0), EntityId(3), 2);
        let full = enumerate_paths_capped(&sub, EntityId(0), EntityId(3), 3, 10);
        assert_eq!(full.paths.len(), 2);
        assert!(!full.truncated);
        let capped = enumerate_paths_capped(&sub, EntityId(0), EntityId(3), 3, 1);
        assert_eq!(capped.paths.len(), 1);
        assert!(capped.truncated);
    }
}
