#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use talentgraph::extraction::{Entity, EntitySet, EntityType};
use talentgraph::{DocKind, Document, JobArea, KnowledgeGraph};

pub const TYPES: [EntityType; 3] = [EntityType::Skill, EntityType::Education, EntityType::Experience];

/// Random labeled documents over a small shared term pool. Terms reuse names
/// across entity types so that identity by (canonical, type) is exercised.
pub fn random_docs(rng: &mut impl Rng, max_docs: usize, max_pool: usize) -> Vec<(Document, EntitySet)> {
    let pool_size = rng.gen_range(1..=max_pool);
    let mut pool: Vec<(String, EntityType)> = (0..pool_size)
        .map(|j| {
            let name = format!("Term {}", j % (max_pool / 2).max(1));
            (name, TYPES[rng.gen_range(0..TYPES.len())])
        })
        .collect();
    pool.sort();
    pool.dedup();
    let n_docs = rng.gen_range(1..=max_docs);
    (0..n_docs)
        .map(|i| {
            let kind = if rng.gen_bool(0.5) { DocKind::Cv } else { DocKind::Jd };
            let id = format!("{}-{i:02}", if kind == DocKind::Cv { "cv" } else { "jd" });
            let area = JobArea::ALL[rng.gen_range(0..JobArea::ALL.len())];
            let k = rng.gen_range(0..=pool.len().min(6));
            let picks: Vec<Entity> = pool
                .choose_multiple(rng, k)
                .map(|(name, t)| Entity::new(name.clone(), *t))
                .collect();
            let doc = Document::new(id.clone(), kind, "text").with_label(area);
            (doc, EntitySet::from_entities(id, picks))
        })
        .collect()
}

pub fn build(docs: &[(Document, EntitySet)]) -> KnowledgeGraph {
    KnowledgeGraph::from_documents(docs.iter().map(|(d, s)| (d, s))).expect("unique ids")
}
