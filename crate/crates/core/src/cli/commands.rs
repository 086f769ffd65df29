use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::config::{Config, ExtractorKind};
use super::report::run_report;
use super::store::{
    load_graph, read_entity_store, read_queries, save_graph, to_jsonl, write_atomic, write_entity_store,
    StoreRecord,
};
use super::CliError;
use crate::corpus::{
    default_pools, load_corpus, synth_corpus, Corpus, CorpusFormat, DocKind, PiiScrubber, SynthParams,
};
use crate::extraction::{
    extract_gazetteer, extract_llm_batch, refine, AuditLog, EntitySet, Gazetteer, LlmClient, RefineConfig,
};
use crate::gnn::{
    node_task, save_checkpoint, table2_csv, table2_markdown, tfidf_on_task, train_arch, Arch, ClassifyConfig,
    Table2Row,
};
use crate::graph::{export_graph, stats, GraphFormat, KnowledgeGraph};
use crate::recommend::{
    baseline_direct, baseline_random, candidate_entities, evaluate_recommendations, graph_labels, recommend,
    recommendation_table, table1_markdown, task_name, Measure, Method, Query, RankedRecommendation, Table1Row, TableConfig,
};

#[derive(Debug, Parser)]
#[command(name = "talentgraph", version, about = "HR knowledge-graph pipeline")]
pub struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a labeled synthetic CV/JD corpus.
    Synth(SynthArgs),
    /// Scrub PII, extract and refine entities into an entity store.
    Ingest(IngestArgs),
    /// Build the knowledge graph and node features from an entity store.
    Build(BuildArgs),
    /// Rank documents for each query by k-hop propagation.
    Recommend(RecommendArgs),
    /// Train job-area classifiers on the graph.
    Classify(ClassifyArgs),
    /// Convert a graph file to GraphML, DOT or JSONL.
    Export(ExportArgs),
    /// Run the whole pipeline and write a run report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// CVs and JDs generated per job area.
    #[arg(long)]
    pub per_category: Option<usize>,
    #[arg(long)]
    pub overlap: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the matching gazetteer (JSONL of {type, term}).
    #[arg(long)]
    pub gazetteer_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Corpus in JSONL or CSV (by extension).
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum)]
    pub extractor: Option<ExtractorKind>,
    #[arg(long)]
    pub gazetteer: Option<PathBuf>,
    /// File with one person name per line to redact.
    #[arg(long)]
    pub names: Option<PathBuf>,
    /// Append LLM request/response pairs to this JSONL file.
    #[arg(long)]
    pub audit: Option<PathBuf>,
    /// Failure manifest path; defaults to `<out>.failures.jsonl`.
    #[arg(long)]
    pub failures: Option<PathBuf>,
    #[arg(long)]
    pub max_words: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub entities: PathBuf,
    /// Graph file; `.jsonl` for JSONL, GraphML otherwise.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Degree,
    Pagerank,
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Degree => Measure::Degree,
            MeasureArg::Pagerank => Measure::PageRank,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum BaselineArg {
    #[default]
    None,
    Direct,
    Random,
}

#[derive(Debug, Args)]
pub struct RecommendArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// JSONL of `{"doc_id": ...}` or inline `{"query_id", "target", "entities"}`.
    #[arg(long, required_unless_present = "full_table")]
    pub queries: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    pub top_n: usize,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,
    #[arg(long, value_enum, default_value_t = BaselineArg::None)]
    pub baseline: BaselineArg,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Every document as a query: N = 2, 5, 10 plus D and R rows.
    #[arg(long)]
    pub full_table: bool,
    /// Results JSONL; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Markdown table path.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ArchArg {
    Gcn,
    Gat,
    Both,
}

impl ArchArg {
    fn archs(self) -> Vec<Arch> {
        match self {
            ArchArg::Gcn => vec![Arch::Gcn],
            ArchArg::Gat => vec![Arch::Gat],
            ArchArg::Both => vec![Arch::Gcn, Arch::Gat],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClsBaselineArg {
    Tfidf,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value_t = ArchArg::Both)]
    pub arch: ArchArg,
    #[arg(long, value_enum)]
    pub baseline: Option<ClsBaselineArg>,
    /// Corpus with the document texts, required by the TF-IDF baseline.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Seeds both the split and the model initialization.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Metrics CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Markdown table; stdout when omitted.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Checkpoint base path; each model is saved as `<base>-<arch>.{json,bin}`.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Graphml,
    Dot,
    Jsonl,
}

impl From<FormatArg> for GraphFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Graphml => GraphFormat::GraphMl,
            FormatArg::Dot => GraphFormat::Dot,
            FormatArg::Jsonl => GraphFormat::Jsonl,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub format: FormatArg,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Labeled corpus; the configured synthetic corpus when omitted.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Report base path; writes `<out>.json` and `<out>.md`.
    #[arg(long)]
    pub out: PathBuf,
    /// Skip the GNN and TF-IDF stage.
    #[arg(long)]
    pub skip_classify: bool,
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn read_names(path: &Path) -> Result<Vec<String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    Ok(text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect())
}

pub(crate) fn load_gazetteer(path: Option<&Path>) -> Result<Gazetteer, CliError> {
    match path {
        Some(p) => {
            let f = std::fs::File::open(p).map_err(|e| CliError::io(p, e))?;
            Ok(Gazetteer::read_jsonl(std::io::BufReader::new(f))?)
        }
        None => Ok(Gazetteer::from_pools(&default_pools())),
    }
}

/// Per-document extraction outcome, in corpus order.
pub(crate) type Extracted = Vec<Result<EntitySet, String>>;

/// Runs the configured extractor and refinement. The LLM client is created
/// (and its key checked) before any request is sent.
pub(crate) fn extract_corpus(
    corpus: &Corpus,
    extractor: ExtractorKind,
    gazetteer: Option<&Path>,
    audit: Option<&Path>,
    cfg: &Config,
    refine_cfg: &RefineConfig,
) -> Result<Extracted, CliError> {
    match extractor {
        ExtractorKind::Gazetteer => {
            let gaz = load_gazetteer(gazetteer)?;
            Ok(corpus
                .documents()
                .iter()
                .map(|d| Ok(refine(&extract_gazetteer(d, &gaz), refine_cfg)))
                .collect())
        }
        ExtractorKind::Llm => {
            let mut client = LlmClient::from_env(cfg.llm.clone())?;
            if let Some(a) = audit {
                client = client.with_audit(AuditLog::create(a).map_err(|e| CliError::io(a, e))?);
            }
            Ok(extract_llm_batch(corpus.documents(), &client)
                .into_iter()
                .map(|r| r.map(|raw| refine(&raw, refine_cfg)).map_err(|e| e.to_string()))
                .collect())
        }
    }
}

pub(crate) fn scrubber(cfg: &Config, names_file: Option<&Path>) -> Result<PiiScrubber, CliError> {
    let mut names = cfg.pii_names.clone();
    if let Some(p) = names_file {
        names.extend(read_names(p)?);
    }
    Ok(PiiScrubber::new().with_names(names))
}

pub fn cmd_synth(a: &SynthArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let pools = default_pools();
    let params = SynthParams::new(
        a.seed.unwrap_or(cfg.synth.seed),
        a.per_category.unwrap_or(cfg.synth.docs_per_category),
        pools.clone(),
        a.overlap.unwrap_or(cfg.synth.overlap),
    );
    let corpus = synth_corpus(&params)?;
    write_atomic(&a.out, corpus.to_jsonl().as_bytes())?;
    if let Some(p) = &a.gazetteer_out {
        let mut buf = Vec::new();
        Gazetteer::from_pools(&pools).write_jsonl(&mut buf)?;
        write_atomic(p, &buf)?;
    }
    let line = json!({"documents": corpus.len(), "seed": params.seed, "out": a.out});
    emit(out, None, &format!("{line}\n"))
}

pub fn cmd_ingest(a: &IngestArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let mut corpus = load_corpus(&a.corpus, CorpusFormat::from_path(&a.corpus))?;
    let redactions = corpus.scrub(&scrubber(cfg, a.names.as_deref())?)?;
    let refine_cfg = match a.max_words {
        Some(w) => RefineConfig::default().with_max_words(w),
        None => cfg.refine(),
    };
    let gazetteer = a.gazetteer.as_deref().or(cfg.gazetteer.as_deref());
    let extracted = extract_corpus(
        &corpus,
        a.extractor.unwrap_or(cfg.extractor),
        gazetteer,
        a.audit.as_deref(),
        cfg,
        &refine_cfg,
    )?;
    let mut records = Vec::new();
    let mut failures = Vec::new();
    for (doc, r) in corpus.documents().iter().zip(extracted) {
        match r {
            Ok(set) => records.push(StoreRecord::new(doc, set)),
            Err(error) => failures.push(json!({"doc_id": doc.id, "error": error})),
        }
    }
    write_entity_store(&records, &a.out)?;
    let summary = json!({
        "documents": corpus.len(),
        "extracted": records.len(),
        "failed": failures.len(),
        "redactions": redactions,
    });
    emit(out, None, &format!("{summary}\n"))?;
    if failures.is_empty() {
        return Ok(());
    }
    let manifest = a.failures.clone().unwrap_or_else(|| {
        let name = a.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
        a.out.with_file_name(format!("{name}.failures.jsonl"))
    });
    write_atomic(&manifest, to_jsonl(&failures).as_bytes())?;
    Err(CliError::Partial {
        failed: failures.len(),
        total: corpus.len(),
        manifest,
    })
}

/// Graph plus node features from entity-store records.
pub(crate) fn graph_from_records(records: &[StoreRecord], cfg: &Config) -> Result<KnowledgeGraph, CliError> {
    let mut g = KnowledgeGraph::new();
    for r in records {
        g.add_document(&r.document(), &r.entity_set())?;
    }
    if !g.is_empty() {
        g.embed_nodes(cfg.embedding.provider().as_ref())?;
    }
    Ok(g)
}

pub fn cmd_build(a: &BuildArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let records = read_entity_store(&a.entities)?;
    if records.is_empty() {
        eprintln!("warning: entity store {} is empty; writing an empty graph", a.entities.display());
    }
    let g = graph_from_records(&records, cfg)?;
    save_graph(&g, &a.out)?;
    let s = serde_json::to_string_pretty(&stats(&g)).expect("stats serialize");
    emit(out, None, &format!("{s}\n"))
}

fn table_config(a: &RecommendArgs, cfg: &Config) -> TableConfig {
    let mut t = cfg.recommend.clone();
    if let Some(k) = a.k {
        t.k = k;
    }
    if let Some(m) = a.measure {
        t.measure = m.into();
    }
    if let Some(s) = a.seed {
        t.seed = s;
    }
    t
}

/// Rows for whichever queries carry a labeled document id, grouped by task.
fn ad_hoc_rows(
    g: &KnowledgeGraph,
    queries: &[Query],
    results: &[(String, RankedRecommendation)],
) -> Result<Vec<Table1Row>, CliError> {
    let labels = graph_labels(g);
    let kind_of: BTreeMap<&str, DocKind> = queries
        .iter()
        .filter_map(|q| q.query_id.as_deref().map(|id| (id, q.target_kind.opposite())))
        .collect();
    let mut groups: BTreeMap<(usize, DocKind), (String, Vec<RankedRecommendation>)> = BTreeMap::new();
    let order = |row: &str| match row {
        "D" => 1,
        "R" => 2,
        _ => 0,
    };
    for (row, r) in results {
        let Some(id) = r.query_id.as_deref() else { continue };
        if !labels.contains_key(id) {
            continue;
        }
        let Some(&kind) = kind_of.get(id) else { continue };
        groups
            .entry((order(row), kind))
            .or_insert_with(|| (row.clone(), Vec::new()))
            .1
            .push(r.clone());
    }
    let mut rows = Vec::new();
    for ((_, kind), (row, rs)) in groups {
        let m = evaluate_recommendations(&rs, &labels)?;
        rows.push(Table1Row::new(row, task_name(kind), &m));
    }
    Ok(rows)
}

pub fn cmd_recommend(a: &RecommendArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    if a.top_n == 0 {
        return Err(CliError::Usage("--top-n must be at least 1".into()));
    }
    let (g, _) = load_graph(&a.graph)?;
    let tcfg = table_config(a, cfg);
    let (lines, rows) = if a.full_table {
        let entries = recommendation_table(&g, &tcfg)?;
        let lines: Vec<_> = entries
            .iter()
            .flat_map(|e| {
                e.results
                    .iter()
                    .map(move |r| json!({"row": e.row.n, "task": e.row.task, "result": r}))
            })
            .collect();
        (lines, entries.into_iter().map(|e| e.row).collect::<Vec<_>>())
    } else {
        let path = a
            .queries
            .as_deref()
            .ok_or_else(|| CliError::Usage("--queries is required without --full-table".into()))?;
        let refine_cfg = cfg.refine();
        let queries: Vec<Query> = read_queries(path)?
            .iter()
            .map(|l| l.to_query(&g, a.top_n, &refine_cfg))
            .collect::<Result<_, _>>()?;
        let mut results = Vec::new();
        for (i, q) in queries.iter().enumerate() {
            results.push((a.top_n.to_string(), recommend(&g, q, tcfg.k, tcfg.measure)?));
            match a.baseline {
                BaselineArg::None => {}
                BaselineArg::Direct => {
                    results.push(("D".into(), baseline_direct(q, &candidate_entities(&g, q.target_kind))?));
                }
                BaselineArg::Random => {
                    let ids: Vec<String> = candidate_entities(&g, q.target_kind)
                        .into_keys()
                        .filter(|id| q.query_id.as_deref() != Some(id.as_str()))
                        .collect();
                    let mut r = if ids.is_empty() {
                        RankedRecommendation::empty(q, Method::Random)
                    } else {
                        baseline_random(&ids, q.top_n.min(ids.len()), tcfg.seed.wrapping_add(i as u64))?
                    };
                    r.query_id = q.query_id.clone();
                    results.push(("R".into(), r));
                }
            }
        }
        let rows = ad_hoc_rows(&g, &queries, &results)?;
        let lines = results
            .iter()
            .map(|(row, r)| json!({"row": row, "result": r}))
            .collect();
        (lines, rows)
    };
    let jsonl = to_jsonl(&lines);
    emit(out, a.out.as_deref(), &jsonl)?;
    if !rows.is_empty() {
        let md = table1_markdown(&rows);
        match (&a.table, &a.out) {
            (Some(p), _) => write_atomic(p, md.as_bytes())?,
            (None, Some(_)) => emit(out, None, &md)?,
            (None, None) => {}
        }
    }
    Ok(())
}

fn corpus_texts(path: &Path, cfg: &Config) -> Result<BTreeMap<String, String>, CliError> {
    let mut corpus = load_corpus(path, CorpusFormat::from_path(path))?;
    corpus.scrub(&scrubber(cfg, None)?)?;
    Ok(corpus.documents().iter().map(|d| (d.id.clone(), d.text.clone())).collect())
}

fn classify_config(a: &ClassifyArgs, cfg: &Config) -> ClassifyConfig {
    let mut c = cfg.classify.clone();
    if let Some(s) = a.seed {
        c.split_seed = s;
        c.train.seed = s;
    }
    if let Some(e) = a.epochs {
        c.train.epochs = e;
    }
    c
}

pub fn cmd_classify(a: &ClassifyArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let texts = match (a.baseline, &a.corpus) {
        (Some(ClsBaselineArg::Tfidf), None) => {
            return Err(CliError::Usage("--baseline tfidf needs --corpus for document texts".into()))
        }
        (Some(ClsBaselineArg::Tfidf), Some(p)) => Some(corpus_texts(p, cfg)?),
        (None, _) => None,
    };
    let (g, _) = load_graph(&a.graph)?;
    let ccfg = classify_config(a, cfg);
    let task = node_task(&g, &ccfg)?;
    if task.split.train.is_empty() || task.split.test.is_empty() {
        return Err(CliError::Gnn(crate::gnn::GnnError::Config(
            "degenerate split: train and test must both be nonempty".into(),
        )));
    }
    let mut rows = Vec::new();
    if let Some(texts) = &texts {
        rows.push(Table2Row::new("Tfidf+LogR.", &tfidf_on_task(&g, &task, texts, &ccfg.tfidf)?));
    }
    for arch in a.arch.archs() {
        let o = train_arch(&task, arch, &ccfg)?;
        rows.push(Table2Row::new(arch.to_string(), o.metrics.test.as_ref().expect("nonempty test split")));
        if let Some(base) = &a.checkpoint {
            let name = base.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            let p = base.with_file_name(format!("{name}-{}", arch.to_string().to_lowercase()));
            save_checkpoint(&o.model, ccfg.train.seed, &p)?;
        }
    }
    if let Some(p) = &a.out {
        write_atomic(p, table2_csv(&rows).as_bytes())?;
    }
    emit(out, a.table.as_deref(), &table2_markdown(&rows))
}

pub fn cmd_export(a: &ExportArgs, _cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let (g, sidecar) = load_graph(&a.graph)?;
    let format: GraphFormat = a.format.into();
    let reference = sidecar
        .filter(|_| format != GraphFormat::Dot)
        .map(|p| std::fs::canonicalize(&p).unwrap_or(p).to_string_lossy().into_owned());
    write_atomic(&a.out, &export_graph(&g, format, reference.as_deref()))?;
    let line = json!({"nodes": g.node_count(), "edges": g.edge_count(), "format": format!("{format:?}").to_lowercase(), "out": a.out});
    emit(out, None, &format!("{line}\n"))
}

pub fn cmd_report(a: &ReportArgs, cfg: &Config, out: &mut dyn Write) -> Result<(), CliError> {
    let report = run_report(cfg, a.corpus.as_deref(), !a.skip_classify)?;
    let name = a.out.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let json_path = a.out.with_file_name(format!("{name}.json"));
    let md_path = a.out.with_file_name(format!("{name}.md"));
    write_atomic(&json_path, serde_json::to_string_pretty(&report).expect("report serializes").as_bytes())?;
    let md = report.to_markdown();
    write_atomic(&md_path, md.as_bytes())?;
    emit(out, None, &md)
}
