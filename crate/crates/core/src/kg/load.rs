//! TSV loaders for entity and triple files.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Serialize;

use super::{Entity, EntityType, KgBuilder, KgError, KnowledgeGraph, Triple};
use crate::chem;

/// Counts reported after loading.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadStats {
    pub entities: usize,
    pub triples: usize,
    pub duplicate_triples: usize,
    pub self_loops_skipped: usize,
    pub entities_by_type: BTreeMap<String, usize>,
    pub triples_by_relation: BTreeMap<String, usize>,
}

/// Loads a graph from an entity table (`id, type, name, smiles?`) and a
/// triple table (`h, r, t`). Blank lines and `#` comments are skipped.
/// Self-loops are dropped and counted.
pub fn load_kg<T: BufRead, E: BufRead>(
    triples: T,
    entities: E,
) -> Result<(KnowledgeGraph, LoadStats), KgError> {
    let mut b = KgBuilder::new();
    let mut stats = LoadStats::default();
    for (i, line) in entities.lines().enumerate() {
        let line = line.map_err(|e| KgError::Io(e.to_string()))?;
        let lineno = i + 1;
        if skip(&line) {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() < 3 || cols.len() > 4 {
            return Err(KgError::MalformedRow {
                line: lineno,
                reason: format!("expected 3 or 4 columns, found {}", cols.len()),
            });
        }
        let id = cols[0].trim();
        if id.is_empty() {
            return Err(KgError::MalformedRow {
                line: lineno,
                reason: "empty entity id".into(),
            });
        }
        let smiles = cols.get(3).map(|s| s.trim()).filter(|s| !s.is_empty());
        if let Some(s) = smiles {
            chem::parse_valid(s).map_err(|e| KgError::InvalidSmiles {
                id: id.to_string(),
                reason: e.to_string(),
            })?;
        }
        let entity_type = EntityType::parse(cols[1]);
        *stats
            .entities_by_type
            .entry(entity_type.noun().to_string())
            .or_default() += 1;
        b.add_entity(Entity {
            id: id.to_string(),
            entity_type,
            name: cols[2].trim().to_string(),
            smiles: smiles.map(str::to_string),
        })?;
    }
    for (i, line) in triples.lines().enumerate() {
        let line = line.map_err(|e| KgError::Io(e.to_string()))?;
        let lineno = i + 1;
        if skip(&line) {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').map(str::trim).collect();
        if cols.len() != 3 || cols.iter().any(|c| c.is_empty()) {
            return Err(KgError::MalformedRow {
                line: lineno,
                reason: format!("expected 3 non-empty columns, found {}", cols.len()),
            });
        }
        let resolve = |id: &str| {
            b.entity_id(id).ok_or_else(|| KgError::DanglingEndpoint {
                line: lineno,
                id: id.to_string(),
            })
        };
        let h = resolve(cols[0])?;
        let t = resolve(cols[2])?;
        if h == t {
            stats.self_loops_skipped += 1;
            continue;
        }
        let r = b.intern_relation(cols[1]);
        if b.add_triple(Triple { h, r, t }) {
            *stats
                .triples_by_relation
                .entry(cols[1].to_string())
                .or_default() += 1;
        }
    }
    stats.duplicate_triples = b.duplicates();
    let kg = b.build();
    stats.entities = kg.entity_count();
    stats.triples = kg.triple_count();
    log::info!(
        "loaded {} entities, {} triples ({} duplicates, {} self-loops skipped)",
        stats.entities,
        stats.triples,
        stats.duplicate_triples,
        stats.self_loops_skipped
    );
    Ok((kg, stats))
}

pub fn load_kg_files(
    triples: &Path,
    entities: &Path,
) -> Result<(KnowledgeGraph, LoadStats), KgError> {
    let open = |p: &Path| {
        File::open(p)
            .map(BufReader::new)
            .map_err(|e| KgError::Io(format!("{}: {e}", p.display())))
    };
    load_kg(open(triples)?, open(entities)?)
}

fn skip(line: &str) -> bool {
    let t = line.trim();
    t.is_empty() || t.starts_with('#')
}
