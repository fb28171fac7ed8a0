#![allow(dead_code)]

use std::path::PathBuf;

use molforge::chem::{BondOrder, Molecule};
use petgraph::algo::is_isomorphic_matching;
use petgraph::graph::UnGraph;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// `(smiles, name)` rows of a tab-separated fixture, skipping comments.
pub fn smiles_rows(name: &str) -> Vec<(String, String)> {
    read_fixture(name)
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut cols = l.split('\t');
            let s = cols.next().unwrap().to_string();
            let n = cols.next().unwrap_or("").to_string();
            (s, n)
        })
        .collect()
}

type NodeKey = (u8, bool, i8, Option<u16>, u8);

fn to_graph(m: &Molecule) -> UnGraph<NodeKey, BondOrder> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = m
        .atoms()
        .iter()
        .map(|a| {
            g.add_node((
                a.element.atomic_number(),
                a.aromatic,
                a.formal_charge,
                a.isotope,
                a.hydrogen_count(),
            ))
        })
        .collect();
    for b in m.bonds() {
        g.add_edge(nodes[b.begin], nodes[b.end], b.order);
    }
    g
}

/// Attribute-matching graph isomorphism, computed by petgraph's VF2.
pub fn isomorphic(a: &Molecule, b: &Molecule) -> bool {
    is_isomorphic_matching(&to_graph(a), &to_graph(b), |x, y| x == y, |x, y| x == y)
}

pub mod oracles;

pub mod cards {
    use super::{fixture, read_fixture};
    use molforge::forge::{
        kg_answer, kg_context, kg_question, path_to_text, render_card, synth_instruction, vs_query,
        AnswerVariant, InstructionRecord, KgConfig, PropertyTable, Task, TemplateSet,
    };
    use molforge::kg::{enclosing_subgraph, enumerate_paths, load_kg_files, KnowledgeGraph};

    pub fn load(prefix: &str) -> KnowledgeGraph {
        let t = fixture(&format!("cards/{prefix}_triples.tsv"));
        let e = fixture(&format!("cards/{prefix}_entities.tsv"));
        load_kg_files(&t, &e).unwrap().0
    }

    /// `(rendered, golden)` for the knowledge-graph example card: the a-b-c
    /// path as context, the (h, r, t) fact as question and answer.
    pub fn kg_card() -> (String, String) {
        let kg = load("kg");
        let tpl = TemplateSet::default();
        let sub = enclosing_subgraph(&kg, "a", "c", 2).unwrap();
        let paths = enumerate_paths(
            &sub,
            kg.entity_id("a").unwrap(),
            kg.entity_id("c").unwrap(),
            3,
        );
        let sentences: Vec<String> = paths
            .paths
            .iter()
            .map(|p| path_to_text(p, &kg, &tpl).unwrap())
            .collect();
        let fact = kg.triple("h", "r", "t").unwrap();
        let rec = InstructionRecord {
            id: None,
            context: Some(kg_context(&sentences, &tpl)),
            question: kg_question(&kg, &fact, &tpl).unwrap(),
            answer: kg_answer(&kg, &fact, AnswerVariant::Card, &tpl).unwrap(),
            task: Task::KgFact,
            provenance: vec![],
            seed: 0,
            meta: None,
        };
        (render_card(&rec), read_fixture("cards/kg_card.golden"))
    }

    pub fn synth_card() -> (String, String) {
        let table =
            PropertyTable::from_reader(read_fixture("cards/synth_properties.tsv").as_bytes())
                .unwrap();
        let row = &table.rows[0];
        let rec = synth_instruction(
            &row.smiles,
            &row.present(&table.schema),
            0,
            &TemplateSet::default(),
        )
        .unwrap();
        (render_card(&rec), read_fixture("cards/synth_card.golden"))
    }

    pub fn vs_card() -> (String, String) {
        let kg = load("vs");
        let rec = vs_query(
            &kg,
            "DB06151",
            "P48637",
            Some(&KgConfig::default()),
            0,
            &TemplateSet::default(),
        )
        .unwrap();
        (render_card(&rec), read_fixture("cards/vs_card.golden"))
    }
}
