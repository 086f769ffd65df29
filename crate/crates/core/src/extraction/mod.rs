//! Entity extraction: document text to a refined, typed entity set.
//!
//! Two extractors produce a [`RawEntitySet`]: an LLM client speaking a minimal
//! chat-completion JSON protocol ([`LlmClient`]) and an offline
//! [`Gazetteer`]. Both feed [`refine`], which canonicalizes, filters noise
//! and deduplicates.

mod gazetteer;
mod llm;
mod parse;
mod prompt;
mod refine;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use gazetteer::{extract_gazetteer, Gazetteer};
pub use llm::{extract_llm, extract_llm_batch, AuditLog, LlmClient, LlmConfig};
pub use parse::{parse_llm_response, serialize_raw};
pub use prompt::{build_prompt, CV_PROMPT, CV_PLACEHOLDER, JD_PROMPT, JD_PLACEHOLDER};
pub use refine::{refine, RefineConfig};

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("no JSON object found in response")]
    NoJson,
    #[error("JSON response contains no entity strings")]
    NoEntities,
    #[error("document {doc_id}: {source}; raw reply: {raw}")]
    Response {
        doc_id: String,
        #[source]
        source: Box<ExtractionError>,
        raw: String,
    },
    #[error("document {doc_id}: request failed after {attempts} attempt(s): {message}")]
    Http {
        doc_id: String,
        attempts: u32,
        message: String,
    },
    #[error("configuration: {0}")]
    Config(String),
    #[error("document {0} has empty text")]
    EmptyText(String),
    #[error("gazetteer: {0}")]
    Gazetteer(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Closed set of entity categories requested by the extraction prompts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EntityType {
    Education,
    Skill,
    Qualification,
    Experience,
    Other,
}

impl EntityType {
    pub const ALL: [EntityType; 5] = [
        EntityType::Education,
        EntityType::Skill,
        EntityType::Qualification,
        EntityType::Experience,
        EntityType::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EntityType::Education => "Education",
            EntityType::Skill => "Skill",
            EntityType::Qualification => "Qualification",
            EntityType::Experience => "Experience",
            EntityType::Other => "Other",
        }
    }

    /// Key used when a group is written as an LLM-style JSON object.
    pub fn response_key(self) -> &'static str {
        match self {
            EntityType::Education => "Education",
            EntityType::Skill => "Skills",
            EntityType::Qualification => "Qualifications",
            EntityType::Experience => "Experience",
            EntityType::Other => "Other",
        }
    }

    /// Maps a response key onto a type; anything unrecognised is `Other`.
    pub fn from_response_key(key: &str) -> EntityType {
        key.parse().unwrap_or(EntityType::Other)
    }
}

impl fmt::Display for EntityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EntityType {
    type Err = ExtractionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let k = s.trim().to_lowercase();
        Ok(match k.as_str() {
            "education" | "educations" => EntityType::Education,
            "skill" | "skills" => EntityType::Skill,
            "qualification" | "qualifications" => EntityType::Qualification,
            "experience" | "experiences" => EntityType::Experience,
            "other" | "others" => EntityType::Other,
            _ => return Err(ExtractionError::Gazetteer(format!("unknown entity type {s:?}"))),
        })
    }
}

impl Serialize for EntityType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for EntityType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A refined entity. `canonical` defines identity together with `etype`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Entity {
    pub surface: String,
    pub canonical: String,
    pub etype: EntityType,
}

impl Entity {
    pub fn new(surface: impl Into<String>, etype: EntityType) -> Self {
        let surface = surface.into();
        Entity {
            canonical: crate::text::canonicalize(&surface),
            surface,
            etype,
        }
    }

    pub fn key(&self) -> (&str, EntityType) {
        (&self.canonical, self.etype)
    }
}

/// Unrefined extractor output, grouped by type in extraction order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawEntitySet {
    pub doc_id: String,
    pub groups: BTreeMap<EntityType, Vec<String>>,
}

impl RawEntitySet {
    pub fn new(doc_id: impl Into<String>) -> Self {
        RawEntitySet {
            doc_id: doc_id.into(),
            groups: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, etype: EntityType, surface: impl Into<String>) {
        self.groups.entry(etype).or_default().push(surface.into());
    }

    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn group(&self, etype: EntityType) -> &[String] {
        self.groups.get(&etype).map_or(&[], Vec::as_slice)
    }
}

/// Refined, deduplicated entities of one document.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySet {
    pub doc_id: String,
    pub entities: Vec<Entity>,
}

impl EntitySet {
    /// Builds a set from entities, keeping the first of each `(canonical, etype)`.
    pub fn from_entities(doc_id: impl Into<String>, entities: impl IntoIterator<Item = Entity>) -> Self {
        let mut seen = std::collections::HashSet::new();
        let entities = entities
            .into_iter()
            .filter(|e| seen.insert((e.canonical.clone(), e.etype)))
            .collect();
        EntitySet {
            doc_id: doc_id.into(),
            entities,
        }
    }

    pub fn len(&self) -> usize {
        self.entities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty()
    }

    pub fn contains(&self, canonical: &str, etype: EntityType) -> bool {
        self.entities
            .iter()
            .any(|e| e.etype == etype && e.canonical == canonical)
    }

    /// Lifts the set back into raw form using surface strings.
    pub fn to_raw(&self) -> RawEntitySet {
        let mut raw = RawEntitySet::new(self.doc_id.clone());
        for e in &self.entities {
            raw.push(e.etype, e.surface.clone());
        }
        raw
    }
}
