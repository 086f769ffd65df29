//! Offline extraction: gazetteer lookup, then refinement into a typed entity set.

use talentgraph::extraction::{extract_gazetteer, refine, Gazetteer, RefineConfig};
use talentgraph::{DocKind, Document, EntityType};

fn main() {
    let mut gaz = Gazetteer::new();
    for t in ["Python", "SQL", "machine learning", "Docker"] {
        gaz.insert(EntityType::Skill, t);
    }
    gaz.insert(EntityType::Education, "MSc Computer Science");
    gaz.insert(EntityType::Experience, "team lead");

    let doc = Document::new(
        "cv-1",
        DocKind::Cv,
        "Team lead with an MSc Computer Science. Daily work in python, SQL and Docker; \
         some machine learning projects.",
    );
    let raw = extract_gazetteer(&doc, &gaz);
    println!("raw groups: {:?}", raw.groups);
    let set = refine(&raw, &RefineConfig::default());
    for e in &set.entities {
        println!("{:<11} {:<24} (surface {:?})", e.etype.as_str(), e.canonical, e.surface);
    }
}
