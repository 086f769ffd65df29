//! Typed knowledge graphs built from HR documents (CVs and job descriptions).
//!
//! The pipeline runs in stages, each usable on its own:
//!
//! - [`corpus`]: load, PII-scrub and synthesize labeled document corpora.
//! - [`extraction`]: turn document text into refined, typed entity sets,
//!   either through an LLM endpoint or an offline gazetteer.
//! - [`embedding`]: fixed-dimension node features.
//! - [`graph`]: the document/entity knowledge graph, adjacency and export.
//! - [`recommend`]: entity matching, k-hop propagation and centrality ranking,
//!   with direct and random baselines.
//! - [`gnn`]: GCN and GAT job-area classifiers plus a TF-IDF baseline.
//! - [`cli`]: configuration, pipeline subcommands and reports.

pub mod cli;
pub mod corpus;
pub mod embedding;
pub mod extraction;
pub mod gnn;
pub mod graph;
pub mod recommend;
pub mod text;

pub use corpus::{Corpus, DocKind, Document, JobArea};
pub use graph::KnowledgeGraph;
pub use extraction::{Entity, EntitySet, EntityType, RawEntitySet};
