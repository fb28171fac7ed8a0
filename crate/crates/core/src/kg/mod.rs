//! Typed biomedical knowledge graph with enclosing-subgraph extraction,
//! path enumeration and negative sampling.

mod load;
mod negatives;
mod paths;
mod subgraph;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use load::{load_kg, load_kg_files, LoadStats};
pub use negatives::sample_negatives;
pub use paths::{enumerate_paths, enumerate_paths_capped, Hop, Path, PathSet, DEFAULT_MAX_PATHS};
pub use subgraph::{enclosing_subgraph, enclosing_subgraph_by_id, Subgraph};

pub const DEFAULT_HOPS: usize = 2;
pub const DEFAULT_MAX_PATH_LEN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EntityId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelationId(pub u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityType {
    Drug,
    Gene,
    Disease,
    Target,
    SideEffect,
    Other(String),
}

impl EntityType {
    pub fn parse(label: &str) -> EntityType {
        match label.trim().to_ascii_lowercase().as_str() {
            "drug" | "compound" => EntityType::Drug,
            "gene" => EntityType::Gene,
            "disease" => EntityType::Disease,
            "target" | "protein" => EntityType::Target,
            "side-effect" | "side_effect" | "sideeffect" | "side effect" => EntityType::SideEffect,
            other => EntityType::Other(other.to_string()),
        }
    }

    /// Lowercase noun used in rendered text, e.g. "drug" or "side effect".
    pub fn noun(&self) -> &str {
        match self {
            EntityType::Drug => "drug",
            EntityType::Gene => "gene",
            EntityType::Disease => "disease",
            EntityType::Target => "target",
            EntityType::SideEffect => "side effect",
            EntityType::Other(s) if s.is_empty() => "entity",
            EntityType::Other(s) => s,
        }
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.noun())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entity {
    pub id: String,
    pub entity_type: EntityType,
    pub name: String,
    pub smiles: Option<String>,
}

/// A directed labeled edge over interned ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub h: EntityId,
    pub r: RelationId,
    pub t: EntityId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KgError {
    #[error("DanglingEndpoint: line {line} references unknown entity {id:?}")]
    DanglingEndpoint { line: usize, id: String },
    #[error("MalformedRow: line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("DuplicateEntityId: {0:?}")]
    DuplicateEntityId(String),
    #[error("InvalidSmiles: entity {id:?}: {reason}")]
    InvalidSmiles { id: String, reason: String },
    #[error("UnknownEntity: {0:?}")]
    UnknownEntity(String),
    #[error("ExhaustedSampleSpace: no negative found for ({h}, {r}, {t})")]
    ExhaustedSampleSpace { h: String, r: String, t: String },
    #[error("EmptyPositives")]
    EmptyPositives,
    #[error("io error: {0}")]
    Io(String),
}

/// Immutable, fully indexed knowledge graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeGraph {
    entities: Vec<Entity>,
    entity_index: HashMap<String, EntityId>,
    relations: Vec<String>,
    relation_index: HashMap<String, RelationId>,
    triples: Vec<Triple>,
    triple_set: HashSet<Triple>,
    out_edges: Vec<Vec<u32>>,
    in_edges: Vec<Vec<u32>>,
    neighbors: Vec<Vec<EntityId>>,
    by_type: BTreeMap<EntityType, Vec<EntityId>>,
}

impl KnowledgeGraph {
    pub fn entity_count(&self) -> usize {
        self.entities.len()
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn entities(&self) -> &[Entity] {
        &self.entities
    }

    pub fn entity(&self, id: EntityId) -> &Entity {
        &self.entities[id.0 as usize]
    }

    pub fn entity_id(&self, id: &str) -> Option<EntityId> {
        self.entity_index.get(id).copied()
    }

    /// Looks up an entity id, failing with `UnknownEntity`.
    pub fn require(&self, id: &str) -> Result<EntityId, KgError> {
        self.entity_id(id)
            .ok_or_else(|| KgError::UnknownEntity(id.to_string()))
    }

    pub fn relation(&self, id: RelationId) -> &str {
        &self.relations[id.0 as usize]
    }

    pub fn relation_id(&self, label: &str) -> Option<RelationId> {
        self.relation_index.get(label).copied()
    }

    pub fn relations(&self) -> &[String] {
        &self.relations
    }

    /// Triples in first-seen order.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triple_set.contains(triple)
    }

    pub fn outgoing(&self, e: EntityId) -> impl Iterator<Item = &Triple> {
        self.out_edges[e.0 as usize]
            .iter()
            .map(|&i| &self.triples[i as usize])
    }

    pub fn incoming(&self, e: EntityId) -> impl Iterator<Item = &Triple> {
        self.in_edges[e.0 as usize]
            .iter()
            .map(|&i| &self.triples[i as usize])
    }

    /// Distinct undirected neighbors, ascending.
    pub fn neighbors(&self, e: EntityId) -> &[EntityId] {
        &self.neighbors[e.0 as usize]
    }

    pub fn entities_of_type(&self, t: &EntityType) -> &[EntityId] {
        self.by_type.get(t).map_or(&[], Vec::as_slice)
    }

    /// Resolves string ids and a relation label to a triple of this graph.
    pub fn triple(&self, h: &str, r: &str, t: &str) -> Result<Triple, KgError> {
        let r = self
            .relation_id(r)
            .ok_or_else(|| KgError::UnknownEntity(format!("relation {r}")))?;
        Ok(Triple {
            h: self.require(h)?,
            r,
            t: self.require(t)?,
        })
    }

    /// `(h id, relation, t id)` strings for a triple.
    pub fn labels(&self, triple: &Triple) -> (&str, &str, &str) {
        (
            &self.entity(triple.h).id,
            self.relation(triple.r),
            &self.entity(triple.t).id,
        )
    }
}

/// Incremental construction of a [`KnowledgeGraph`]; duplicate triples are
/// dropped and counted.
#[derive(Debug, Default)]
pub struct KgBuilder {
    entities: Vec<Entity>,
    entity_index: HashMap<String, EntityId>,
    relations: Vec<String>,
    relation_index: HashMap<String, RelationId>,
    triples: Vec<Triple>,
    triple_set: HashSet<Triple>,
    duplicates: usize,
}

impl KgBuilder {
    pub fn new() -> KgBuilder {
        KgBuilder::default()
    }

    pub fn add_entity(&mut self, entity: Entity) -> Result<EntityId, KgError> {
        if self.entity_index.contains_key(&entity.id) {
            return Err(KgError::DuplicateEntityId(entity.id));
        }
        let id = EntityId(self.entities.len() as u32);
        self.entity_index.insert(entity.id.clone(), id);
        self.entities.push(entity);
        Ok(id)
    }

    pub fn entity_id(&self, id: &str) -> Option<EntityId> {
        self.entity_index.get(id).copied()
    }

    pub fn intern_relation(&mut self, label: &str) -> RelationId {
        if let Some(&r) = self.relation_index.get(label) {
            return r;
        }
        let r = RelationId(self.relations.len() as u32);
        self.relations.push(label.to_string());
        self.relation_index.insert(label.to_string(), r);
        r
    }

    /// Adds a triple; returns false if it was already present or is a
    /// self-loop.
    pub fn add_triple(&mut self, triple: Triple) -> bool {
        if triple.h == triple.t {
            return false;
        }
        if self.triple_set.insert(triple) {
            self.triples.push(triple);
            true
        } else {
            self.duplicates += 1;
            false
        }
    }

    /// Convenience for string-keyed triples. Endpoints must already exist.
    pub fn add(&mut self, h: &str, r: &str, t: &str) -> Result<bool, KgError> {
        let hi = self
            .entity_id(h)
            .ok_or_else(|| KgError::UnknownEntity(h.to_string()))?;
        let ti = self
            .entity_id(t)
            .ok_or_else(|| KgError::UnknownEntity(t.to_string()))?;
        let r = self.intern_relation(r);
        Ok(self.add_triple(Triple { h: hi, r, t: ti }))
    }

    pub fn duplicates(&self) -> usize {
        self.duplicates
    }

    pub fn build(self) -> KnowledgeGraph {
        let n = self.entities.len();
        let mut out_edges = vec![Vec::new(); n];
        let mut in_edges = vec![Vec::new(); n];
        let mut neighbors: Vec<Vec<EntityId>> = vec![Vec::new(); n];
        for (i, t) in self.triples.iter().enumerate() {
            out_edges[t.h.0 as usize].push(i as u32);
            in_edges[t.t.0 as usize].push(i as u32);
            neighbors[t.h.0 as usize].push(t.t);
            neighbors[t.t.0 as usize].push(t.h);
        }
        for list in &mut neighbors {
            list.sort_unstable();
            list.dedup();
        }
        let mut by_type: BTreeMap<EntityType, Vec<EntityId>> = BTreeMap::new();
        for (i, e) in self.entities.iter().enumerate() {
            by_type
                .entry(e.entity_type.clone())
                .or_default()
                .push(EntityId(i as u32));
        }
        KnowledgeGraph {
            entities: self.entities,
            entity_index: self.entity_index,
            relations: self.relations,
            relation_index: self.relation_index,
            triples: self.triples,
            triple_set: self.triple_set,
            out_edges,
            in_edges,
            neighbors,
            by_type,
        }
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entity_type_labels() {
        assert_eq!(EntityType::parse("Compound"), EntityType::Drug);
        assert_eq!(EntityType::parse("side-effect").noun(), "side effect");
        assert_eq!(EntityType::parse("Anatomy").noun(), "anatomy");
        assert_eq!(EntityType::Other(String::new()).noun(), "entity");
    }

    #[test]
    fn builder_dedups() {
        let mut b = KgBuilder::new();
        for id in ["a", "b"] {
            b.add_entity(Entity {
                id: id.into(),
                entity_type: EntityType::Drug,
                name: id.into(),
                smiles: None,
            })
            .unwrap();
        }
        assert!(b.add("a", "x", "b").unwrap());
        assert!(!b.add("a", "x", "b").unwrap());
        assert_eq!(b.duplicates(), 1);
        let kg = b.build();
        assert_eq!(kg.triple_count(), 1);
        assert_eq!(kg.neighbors(EntityId(0)), &[EntityId(1)]);
    }
}
