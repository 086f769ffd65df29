use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Corpus, CorpusError, DocKind, Document, EntityPools, JobArea, Provenance};
use crate::extraction::EntityType;

/// Minimum number of terms a category pool must provide.
pub const MIN_POOL_TERMS: usize = 8;

/// Inputs to [`synth_corpus`].
#[derive(Debug, Clone)]
pub struct SynthParams {
    pub seed: u64,
    pub docs_per_category: usize,
    pub pools: EntityPools,
    /// Fraction of each document's terms drawn from other categories.
    pub cross_category_overlap: f64,
    pub terms_per_doc: usize,
}

impl SynthParams {
    pub fn new(seed: u64, docs_per_category: usize, pools: EntityPools, overlap: f64) -> Self {
        SynthParams {
            seed,
            docs_per_category,
            pools,
            cross_category_overlap: overlap,
            terms_per_doc: 12,
        }
    }

    /// Own-category and foreign term counts for one document.
    fn split_counts(&self, pool_len: usize) -> (usize, usize) {
        let o = self.cross_category_overlap;
        let t = self.terms_per_doc as f64;
        let own = ((1.0 - o) * t - 1e-9).ceil().max(0.0) as usize;
        if own <= pool_len {
            return (own, self.terms_per_doc - own);
        }
        let foreign = if o < 1.0 { (pool_len as f64 * o / (1.0 - o)).floor() as usize } else { 0 };
        (pool_len, foreign)
    }
}

/// Generates a labeled CV/JD corpus with `docs_per_category` documents of each
/// kind per job area. Output depends only on the parameters.
pub fn synth_corpus(params: &SynthParams) -> Result<Corpus, CorpusError> {
    let o = params.cross_category_overlap;
    if !(0.0..=1.0).contains(&o) || o.is_nan() {
        return Err(CorpusError::OverlapOutOfRange(o));
    }
    if params.docs_per_category == 0 {
        return Err(CorpusError::NoDocuments);
    }
    for area in JobArea::ALL {
        let p = params.pools.get(&area).ok_or(CorpusError::MissingPool(area))?;
        if p.len() < MIN_POOL_TERMS {
            return Err(CorpusError::PoolTooSmall {
                area,
                len: p.len(),
                min: MIN_POOL_TERMS,
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let per_kind = params.docs_per_category * JobArea::ALL.len();

    // ids carry no category information
    let mut cv_ids: Vec<usize> = (1..=per_kind).collect();
    let mut jd_ids: Vec<usize> = (1..=per_kind).collect();
    cv_ids.shuffle(&mut rng);
    jd_ids.shuffle(&mut rng);

    let mut cvs = Vec::with_capacity(per_kind);
    let mut jds = Vec::with_capacity(per_kind);
    for (ai, area) in JobArea::ALL.into_iter().enumerate() {
        let own_pool = params.pools[&area].typed_terms();
        let foreign_pool: Vec<(EntityType, &str)> = JobArea::ALL
            .into_iter()
            .filter(|a| *a != area)
            .flat_map(|a| params.pools[&a].typed_terms())
            .collect();
        let (n_own, n_foreign) = params.split_counts(own_pool.len());
        for kind in [DocKind::Cv, DocKind::Jd] {
            for i in 0..params.docs_per_category {
                let mut terms: Vec<(EntityType, &str)> =
                    own_pool.choose_multiple(&mut rng, n_own).copied().collect();
                terms.extend(foreign_pool.choose_multiple(&mut rng, n_foreign).copied());
                terms.shuffle(&mut rng);
                let slot = ai * params.docs_per_category + i;
                let (id, out) = match kind {
                    DocKind::Cv => (format!("cv-{:04}", cv_ids[slot]), &mut cvs),
                    DocKind::Jd => (format!("jd-{:04}", jd_ids[slot]), &mut jds),
                };
                out.push(Document::new(id, kind, render(kind, &terms)).with_label(area));
            }
        }
    }
    cvs.sort_by(|a, b| a.id.cmp(&b.id));
    jds.sort_by(|a, b| a.id.cmp(&b.id));
    cvs.extend(jds);

    let mut corpus = Corpus::new(cvs, Provenance::Synthetic)?;
    corpus.seed = Some(params.seed);
    Ok(corpus)
}

fn render(kind: DocKind, terms: &[(EntityType, &str)]) -> String {
    let headings: [(EntityType, &str); 4] = match kind {
        DocKind::Cv => [
            (EntityType::Education, "Education"),
            (EntityType::Qualification, "Certifications"),
            (EntityType::Skill, "Skills"),
            (EntityType::Experience, "Experience"),
        ],
        DocKind::Jd => [
            (EntityType::Education, "Required education"),
            (EntityType::Qualification, "Preferred certifications"),
            (EntityType::Skill, "Required skills"),
            (EntityType::Experience, "Responsibilities"),
        ],
    };
    let mut text = String::from(match kind {
        DocKind::Cv => "Candidate summary.",
        DocKind::Jd => "Open position.",
    });
    for (etype, heading) in headings {
        let group: Vec<&str> = terms
            .iter()
            .filter(|(t, _)| *t == etype)
            .map(|(_, s)| *s)
            .collect();
        if group.is_empty() {
            continue;
        }
        text.push(' ');
        text.push_str(heading);
        text.push_str(": ");
        text.push_str(&group.join(", "));
        text.push('.');
    }
    text
}
