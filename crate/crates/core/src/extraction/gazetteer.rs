use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{EntityType, ExtractionError, RawEntitySet};
use crate::corpus::{Document, EntityPools};
use crate::text::{phrase_key, tokenize};

/// A typed term list matched against document text.
#[derive(Debug, Clone, Default)]
pub struct Gazetteer {
    terms: HashMap<String, BTreeSet<EntityType>>,
    max_tokens: usize,
}

#[derive(Serialize, Deserialize)]
struct GazetteerLine {
    #[serde(rename = "type")]
    etype: EntityType,
    term: String,
}

impl Gazetteer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, etype: EntityType, term: &str) {
        let key = phrase_key(term);
        if key.is_empty() {
            return;
        }
        self.max_tokens = self.max_tokens.max(key.split(' ').count());
        self.terms.entry(key).or_default().insert(etype);
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Every term of every category pool under its pool type.
    pub fn from_pools(pools: &EntityPools) -> Self {
        let mut g = Gazetteer::new();
        for p in pools.values() {
            for (etype, term) in p.typed_terms() {
                g.insert(etype, term);
            }
        }
        g
    }

    /// Reads JSONL lines of `{"type": ..., "term": ...}`.
    pub fn read_jsonl(reader: impl BufRead) -> Result<Self, ExtractionError> {
        let mut g = Gazetteer::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let l: GazetteerLine = serde_json::from_str(&line)
                .map_err(|e| ExtractionError::Gazetteer(format!("line {}: {e}", i + 1)))?;
            g.insert(l.etype, &l.term);
        }
        Ok(g)
    }

    /// Writes one line per (type, term), sorted for stable output.
    pub fn write_jsonl(&self, mut w: impl Write) -> Result<(), ExtractionError> {
        let mut lines: Vec<(EntityType, &str)> = self
            .terms
            .iter()
            .flat_map(|(t, types)| types.iter().map(move |ty| (*ty, t.as_str())))
            .collect();
        lines.sort();
        for (etype, term) in lines {
            let l = GazetteerLine {
                etype,
                term: term.to_string(),
            };
            writeln!(w, "{}", serde_json::to_string(&l).expect("line serializes"))?;
        }
        Ok(())
    }
}

/// Case-insensitive, longest-match-first scan of the document text.
///
/// Matches never span punctuation. Each occurrence is reported with the
/// original casing of the text, under every type the term is listed with.
pub fn extract_gazetteer(doc: &Document, gazetteer: &Gazetteer) -> RawEntitySet {
    let mut out = RawEntitySet::new(doc.id.clone());
    let tokens = tokenize(&doc.text);
    let mut i = 0;
    while i < tokens.len() {
        let mut matched = 0;
        let longest = gazetteer.max_tokens.min(tokens.len() - i);
        for len in (1..=longest).rev() {
            if tokens[i + 1..i + len].iter().any(|t| t.break_before) {
                continue;
            }
            let key = tokens[i..i + len]
                .iter()
                .map(|t| t.lower.as_str())
                .collect::<Vec<_>>()
                .join(" ");
            if let Some(types) = gazetteer.terms.get(&key) {
                let surface = &doc.text[tokens[i].start..tokens[i + len - 1].end];
                for t in types {
                    out.push(*t, surface);
                }
                matched = len;
                break;
            }
        }
        i += matched.max(1);
    }
    out
}
