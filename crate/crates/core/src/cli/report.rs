use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::commands::{extract_corpus, graph_from_records, scrubber};
use super::config::Config;
use super::store::StoreRecord;
use super::CliError;
use crate::corpus::{default_pools, load_corpus, synth_corpus, Corpus, CorpusFormat, SynthParams};
use crate::gnn::{classify, reference_table2, table2_markdown, Arch, Table2Row};
use crate::graph::{stats, GraphStats};
use crate::recommend::{recommendation_table, reference_table1, table1_markdown, Table1Row};

/// Everything needed to compare two runs: the exact config, a digest of the
/// scrubbed corpus, both result tables with reference rows, and stage timings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: Config,
    /// sha256 of the scrubbed corpus in canonical JSONL.
    pub corpus_digest: String,
    pub corpus_source: String,
    pub documents: usize,
    pub extraction_failures: usize,
    pub seeds: BTreeMap<String, u64>,
    pub graph: GraphStats,
    pub recommendation: Vec<Table1Row>,
    pub recommendation_reference: Vec<Table1Row>,
    pub classification: Vec<Table2Row>,
    pub classification_reference: Vec<Table2Row>,
    pub majority_test_accuracy: Option<f64>,
    pub timing_ms: BTreeMap<String, u128>,
}

impl RunReport {
    pub fn to_markdown(&self) -> String {
        let mut s = String::from("# Run report\n\n");
        let _ = writeln!(s, "- corpus: {} ({} documents)", self.corpus_source, self.documents);
        let _ = writeln!(s, "- corpus sha256: `{}`", self.corpus_digest);
        let _ = writeln!(s, "- graph: {} nodes, {} edges", self.graph.nodes, self.graph.edges);
        if self.extraction_failures > 0 {
            let _ = writeln!(s, "- extraction failures: {}", self.extraction_failures);
        }
        let seeds: Vec<String> = self.seeds.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(s, "- seeds: {}", seeds.join(", "));
        s.push_str("\n## Recommendation\n\n");
        s.push_str(&table1_markdown(&self.recommendation));
        s.push_str("\nReference (original corpus):\n\n");
        s.push_str(&table1_markdown(&self.recommendation_reference));
        if !self.classification.is_empty() {
            s.push_str("\n## Job-area classification (test split)\n\n");
            s.push_str(&table2_markdown(&self.classification));
            if let Some(m) = self.majority_test_accuracy {
                let _ = writeln!(s, "\nMajority-class test accuracy: {m:.3}");
            }
            s.push_str("\nReference (original corpus):\n\n");
            s.push_str(&table2_markdown(&self.classification_reference));
        }
        s.push_str("\n## Timing (ms)\n\n");
        for (k, v) in &self.timing_ms {
            let _ = writeln!(s, "- {k}: {v}");
        }
        s
    }
}

pub fn corpus_digest(c: &Corpus) -> String {
    let d = Sha256::digest(c.to_jsonl().as_bytes());
    d.iter().map(|b| format!("{b:02x}")).collect()
}

/// Corpus (file or synthetic) through scrubbing, extraction, graph building,
/// the recommendation table and, when `with_classify`, the classifiers.
pub fn run_report(cfg: &Config, corpus_path: Option<&Path>, with_classify: bool) -> Result<RunReport, CliError> {
    let mut timing = BTreeMap::new();
    let mut t = Instant::now();
    let mut lap = |name: &str, timing: &mut BTreeMap<String, u128>| {
        timing.insert(name.to_string(), t.elapsed().as_millis());
        t = Instant::now();
    };

    let (mut corpus, source) = match corpus_path {
        Some(p) => (load_corpus(p, CorpusFormat::from_path(p))?, p.display().to_string()),
        None => {
            let s = &cfg.synth;
            let params = SynthParams::new(s.seed, s.docs_per_category, default_pools(), s.overlap);
            (synth_corpus(&params)?, "synthetic".to_string())
        }
    };
    corpus.scrub(&scrubber(cfg, None)?)?;
    lap("corpus", &mut timing);

    let extracted = extract_corpus(&corpus, cfg.extractor, cfg.gazetteer.as_deref(), None, cfg, &cfg.refine())?;
    let mut records = Vec::new();
    let mut failures = 0;
    for (doc, r) in corpus.documents().iter().zip(extracted) {
        match r {
            Ok(set) => records.push(StoreRecord::new(doc, set)),
            Err(_) => failures += 1,
        }
    }
    lap("extraction", &mut timing);

    let g = graph_from_records(&records, cfg)?;
    lap("graph", &mut timing);

    let recommendation = recommendation_table(&g, &cfg.recommend)?
        .into_iter()
        .map(|e| e.row)
        .collect();
    lap("recommendation", &mut timing);

    let (classification, majority) = if with_classify {
        let texts: BTreeMap<String, String> =
            corpus.documents().iter().map(|d| (d.id.clone(), d.text.clone())).collect();
        let r = classify(&g, &[Arch::Gcn, Arch::Gat], Some(&texts), &cfg.classify)?;
        (r.rows, Some(r.majority_test_accuracy))
    } else {
        (Vec::new(), None)
    };
    lap("classification", &mut timing);

    let seeds = BTreeMap::from([
        ("synth".to_string(), cfg.synth.seed),
        ("random_baseline".to_string(), cfg.recommend.seed),
        ("split".to_string(), cfg.classify.split_seed),
        ("model".to_string(), cfg.classify.train.seed),
    ]);
    Ok(RunReport {
        config: cfg.clone(),
        corpus_digest: corpus_digest(&corpus),
        corpus_source: source,
        documents: corpus.len(),
        extraction_failures: failures,
        seeds,
        graph: stats(&g),
        recommendation,
        recommendation_reference: reference_table1(),
        classification,
        classification_reference: reference_table2(),
        majority_test_accuracy: majority,
        timing_ms: timing,
    })
}
