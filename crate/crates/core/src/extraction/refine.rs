use std::collections::HashSet;

use super::{Entity, EntitySet, RawEntitySet};
use crate::text::{canonicalize, english_stopwords, token_count};

/// Noise-filter settings.
#[derive(Debug, Clone)]
pub struct RefineConfig {
    /// Entities with more tokens than this are dropped.
    pub max_words: usize,
    /// Tokens that do not count as content.
    pub stopwords: HashSet<String>,
}

impl Default for RefineConfig {
    fn default() -> Self {
        RefineConfig {
            max_words: 3,
            stopwords: english_stopwords().iter().map(|s| s.to_string()).collect(),
        }
    }
}

impl RefineConfig {
    pub fn with_max_words(mut self, max_words: usize) -> Self {
        self.max_words = max_words.max(1);
        self
    }

    // A content token has a letter once surrounding punctuation is stripped,
    // and is not a stopword.
    fn is_content(&self, token: &str) -> bool {
        let core = token.trim_matches(|c: char| !c.is_alphanumeric());
        core.chars().any(char::is_alphabetic) && !self.stopwords.contains(core)
    }
}

/// Canonicalizes, filters and deduplicates raw extractor output.
///
/// Groups are visited in [`EntityType`](super::EntityType) order and items in
/// extraction order; the first surface of each `(canonical, etype)` is kept.
pub fn refine(raw: &RawEntitySet, cfg: &RefineConfig) -> EntitySet {
    let mut out = Vec::new();
    for (etype, items) in &raw.groups {
        for surface in items {
            let canonical = canonicalize(surface);
            if canonical.is_empty() || token_count(&canonical) > cfg.max_words {
                continue;
            }
            if !canonical.split(' ').any(|t| cfg.is_content(t)) {
                continue;
            }
            out.push(Entity {
                surface: surface.clone(),
                canonical,
                etype: *etype,
            });
        }
    }
    EntitySet::from_entities(raw.doc_id.clone(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::EntityType;
    use proptest::prelude::*;

    fn raw(items: &[&str]) -> RawEntitySet {
        let mut r = RawEntitySet::new("d");
        for s in items {
            r.push(EntityType::Skill, *s);
        }
        r
    }

    #[test]
    fn dedup_keeps_first_surface() {
        let s = refine(&raw(&["Team Management", "team  management"]), &RefineConfig::default());
        assert_eq!(s.len(), 1);
        assert_eq!(s.entities[0].canonical, "team management");
        assert_eq!(s.entities[0].surface, "Team Management");
    }

    #[test]
    fn long_phrases_dropped() {
        let s = refine(&raw(&["responsible for managing the entire team"]), &RefineConfig::default());
        assert!(s.is_empty());
        let s = refine(
            &raw(&["four word long phrase"]),
            &RefineConfig::default().with_max_words(4),
        );
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn stopword_only_entities_dropped() {
        // oracle: an entity survives iff some token is outside the stopword list
        let items = ["and the", "Python", "of"];
        let stop = english_stopwords();
        let expected: Vec<String> = items
            .iter()
            .map(|s| s.to_lowercase())
            .filter(|s| s.split(' ').any(|t| !stop.contains(t)))
            .collect();
        assert_eq!(expected, ["python"]);
        let got: Vec<String> = refine(&raw(&items), &RefineConfig::default())
            .entities
            .into_iter()
            .map(|e| e.canonical)
            .collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn digits_and_punctuation_dropped() {
        let s = refine(&raw(&["3.00", "--", "CGPA 3.00", "2019"]), &RefineConfig::default());
        let c: Vec<_> = s.entities.iter().map(|e| e.canonical.as_str()).collect();
        assert_eq!(c, ["cgpa 3.00"]);
    }

    proptest! {
        #[test]
        fn idempotent(items in proptest::collection::vec("[A-Za-z ,.0-9]{0,30}", 0..12), max in 1usize..5) {
            let cfg = RefineConfig::default().with_max_words(max);
            let once = refine(&raw(&items.iter().map(String::as_str).collect::<Vec<_>>()), &cfg);
            let twice = refine(&once.to_raw(), &cfg);
            prop_assert_eq!(&once, &twice);
            for e in &once.entities {
                prop_assert!(token_count(&e.canonical) <= max);
                prop_assert_eq!(canonicalize(&e.canonical), e.canonical.clone());
            }
        }
    }
}
