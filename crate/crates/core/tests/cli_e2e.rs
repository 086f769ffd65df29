//! The `talentgraph` binary driven as a subprocess.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn tg(args: &[&dyn AsRef<std::ffi::OsStr>]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_talentgraph"));
    for a in args {
        c.arg(a);
    }
    c.env_remove("OPENAI_API_KEY").output().expect("spawn talentgraph")
}

fn ok(out: Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json_lines(s: &str) -> Vec<Value> {
    s.lines().filter(|l| !l.trim().is_empty()).map(|l| serde_json::from_str(l).unwrap()).collect()
}

/// Ingest + build of the case-study fixture; returns the graph path.
fn case_study(dir: &TempDir) -> PathBuf {
    let store = dir.path().join("entities.jsonl");
    let graph = dir.path().join("graph.graphml");
    ok(tg(&[
        &"ingest",
        &"--corpus",
        &fixture("case_study.jsonl"),
        &"--gazetteer",
        &fixture("case_study_gazetteer.jsonl"),
        &"--out",
        &store,
    ]));
    ok(tg(&[&"build", &"--entities", &store, &"--out", &graph]));
    graph
}

/// Small synthetic corpus through ingest and build.
fn synthetic(dir: &TempDir, per_category: &str) -> (PathBuf, PathBuf) {
    let corpus = dir.path().join("corpus.jsonl");
    let gaz = dir.path().join("gaz.jsonl");
    let store = dir.path().join("entities.jsonl");
    let graph = dir.path().join("graph.graphml");
    ok(tg(&[&"synth", &"--per-category", &per_category, &"--out", &corpus, &"--gazetteer-out", &gaz]));
    ok(tg(&[&"ingest", &"--corpus", &corpus, &"--gazetteer", &gaz, &"--out", &store]));
    ok(tg(&[&"build", &"--entities", &store, &"--out", &graph]));
    (corpus, graph)
}

fn top_ids(line: &Value) -> Vec<String> {
    line["result"]["items"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["doc_id"].as_str().unwrap().to_string())
        .collect()
}

#[test]
fn case_study_ranks_accountant_first_then_sales() {
    let dir = TempDir::new().unwrap();
    let graph = case_study(&dir);
    let out = ok(tg(&[&"recommend", &"--graph", &graph, &"--queries", &fixture("case_study_query.jsonl")]));
    let lines = json_lines(&out);
    assert_eq!(lines.len(), 1);
    let ids = top_ids(&lines[0]);
    assert_eq!(ids, ["jd-150", "jd-084", "jd-103", "jd-123", "jd-163"]);
    let scores: Vec<f64> = lines[0]["result"]["items"]
        .as_array()
        .unwrap()
        .iter()
        .map(|i| i["score"].as_f64().unwrap())
        .collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn single_shared_skill_is_found() {
    let dir = TempDir::new().unwrap();
    let graph = case_study(&dir);
    let out = ok(tg(&[
        &"recommend",
        &"--graph",
        &graph,
        &"--queries",
        &fixture("single_match_query.jsonl"),
        &"--top-n",
        &"1",
    ]));
    let lines = json_lines(&out);
    assert_eq!(top_ids(&lines[0]), ["jd-201"]);
    assert_eq!(lines[0]["result"]["items"][0]["matched_entities"][0], "menu planning");
}

#[test]
fn build_counts_documents_plus_distinct_entities() {
    let dir = TempDir::new().unwrap();
    let corpus = dir.path().join("c.jsonl");
    std::fs::write(
        &corpus,
        [
            r#"{"id":"cv-1","kind":"CV","text":"python sql excel"}"#,
            r#"{"id":"cv-2","kind":"CV","text":"python docker"}"#,
            r#"{"id":"jd-1","kind":"JD","text":"rust kubernetes linux"}"#,
            r#"{"id":"jd-2","kind":"JD","text":"tableau statistics excel"}"#,
            r#"{"id":"jd-3","kind":"JD","text":"aws terraform go"}"#,
        ]
        .join("\n"),
    )
    .unwrap();
    let gaz = dir.path().join("gaz.jsonl");
    let terms = [
        "python", "sql", "excel", "docker", "rust", "kubernetes", "linux", "tableau", "statistics", "aws", "terraform", "go",
    ];
    let lines: Vec<String> = terms.iter().map(|t| format!(r#"{{"type":"Skill","term":"{t}"}}"#)).collect();
    std::fs::write(&gaz, lines.join("\n")).unwrap();
    let store = dir.path().join("e.jsonl");
    let graph = dir.path().join("g.graphml");
    ok(tg(&[&"ingest", &"--corpus", &corpus, &"--gazetteer", &gaz, &"--out", &store]));
    let stats: Value = serde_json::from_str(&ok(tg(&[&"build", &"--entities", &store, &"--out", &graph]))).unwrap();
    assert_eq!(stats["nodes"], 5 + 12);
    assert_eq!(stats["edges"], 14);
}

#[test]
fn empty_store_builds_empty_graph_with_warning() {
    let dir = TempDir::new().unwrap();
    let store = dir.path().join("e.jsonl");
    std::fs::write(&store, "").unwrap();
    let graph = dir.path().join("g.graphml");
    let out = tg(&[&"build", &"--entities", &store, &"--out", &graph]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).to_lowercase().contains("warning"));
    let stats: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(stats["nodes"], 0);
    assert!(graph.exists());
}

#[test]
fn ingest_and_random_baseline_are_deterministic() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let (_, ga) = synthetic(&a, "2");
    let (_, gb) = synthetic(&b, "2");
    assert_eq!(
        std::fs::read(a.path().join("entities.jsonl")).unwrap(),
        std::fs::read(b.path().join("entities.jsonl")).unwrap()
    );
    let q = a.path().join("q.jsonl");
    std::fs::write(&q, "{\"doc_id\":\"cv-0001\"}\n{\"doc_id\":\"jd-0003\"}\n").unwrap();
    let run = |g: &PathBuf| ok(tg(&[&"recommend", &"--graph", g, &"--queries", &q, &"--baseline", &"random", &"--seed", &"1"]));
    let (ra, rb) = (run(&ga), run(&gb));
    assert_eq!(ra, rb);
    // two methods per query
    assert_eq!(json_lines(&ra).len(), 4);
}

#[test]
fn dot_export_colors_node_kinds() {
    let dir = TempDir::new().unwrap();
    let graph = case_study(&dir);
    let dot = dir.path().join("g.dot");
    ok(tg(&[&"export", &"--graph", &graph, &"--format", &"dot", &"--out", &dot]));
    let text = std::fs::read_to_string(&dot).unwrap();
    assert!(text.starts_with("graph kg {"));
    let colors: std::collections::BTreeSet<&str> = text
        .match_indices("fillcolor=\"")
        .map(|(i, m)| {
            let rest = &text[i + m.len()..];
            &rest[..rest.find('"').unwrap()]
        })
        .collect();
    assert!(colors.len() >= 3, "expected distinct colors per node kind, got {colors:?}");
}

#[test]
fn exports_round_trip_through_build_formats() {
    let dir = TempDir::new().unwrap();
    let graph = case_study(&dir);
    let base: Value = serde_json::from_str(&ok(tg(&[&"build", &"--entities", &dir.path().join("entities.jsonl"), &"--out", &graph]))).unwrap();
    for (fmt, name) in [("graphml", "x.graphml"), ("jsonl", "x.jsonl")] {
        let out = dir.path().join(name);
        ok(tg(&[&"export", &"--graph", &graph, &"--format", &fmt, &"--out", &out]));
        // the exported file is itself a loadable graph
        let q = fixture("case_study_query.jsonl");
        let r = ok(tg(&[&"recommend", &"--graph", &out, &"--queries", &q]));
        assert_eq!(top_ids(&json_lines(&r)[0])[0], "jd-150", "{fmt}");
    }
    assert_eq!(base["nodes"], 39);
}

#[test]
fn invalid_format_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = tg(&[&"export", &"--graph", &dir.path().join("g"), &"--format", &"png", &"--out", &dir.path().join("x")]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for v in ["graphml", "dot", "jsonl"] {
        assert!(err.contains(v), "{err}");
    }
}

#[test]
fn missing_input_is_a_domain_error() {
    let dir = TempDir::new().unwrap();
    let out = tg(&[&"build", &"--entities", &dir.path().join("nope.jsonl"), &"--out", &dir.path().join("g")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nope.jsonl"));
}

#[test]
fn llm_extractor_without_key_fails_before_writing() {
    let dir = TempDir::new().unwrap();
    let store = dir.path().join("e.jsonl");
    let out = tg(&[&"ingest", &"--corpus", &fixture("case_study.jsonl"), &"--extractor", &"llm", &"--out", &store]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!store.exists());
}

#[test]
fn pii_is_scrubbed_before_storage() {
    let dir = TempDir::new().unwrap();
    let store = dir.path().join("e.jsonl");
    let summary: Value = serde_json::from_str(&ok(tg(&[&"ingest", &"--corpus", &fixture("pii_corpus.jsonl"), &"--out", &store])))
        .unwrap();
    assert_eq!(summary["redactions"], 50);
    assert!(!std::fs::read_to_string(&store).unwrap().contains('@'));
}

#[test]
fn classify_is_reproducible_for_a_seed() {
    let dir = TempDir::new().unwrap();
    let (_, graph) = synthetic(&dir, "5");
    let run = |name: &str| {
        let csv = dir.path().join(name);
        ok(tg(&[&"classify", &"--graph", &graph, &"--arch", &"gat", &"--seed", &"3", &"--epochs", &"15", &"--out", &csv]));
        std::fs::read_to_string(csv).unwrap()
    };
    let (a, b) = (run("a.csv"), run("b.csv"));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 2);
    assert!(a.lines().nth(1).unwrap().starts_with("GAT"));
}

#[test]
fn report_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"synth": {"docs_per_category": 2}}"#).unwrap();
    let run = |name: &str| {
        let base = dir.path().join(name);
        ok(tg(&[&"--config", &cfg, &"report", &"--out", &base, &"--skip-classify"]));
        let mut v: Value = serde_json::from_str(&std::fs::read_to_string(base.with_extension("json")).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("timing_ms");
        v
    };
    let (a, b) = (run("r1"), run("r2"));
    assert_eq!(a, b);
    assert_eq!(a["documents"], 80);
    assert!(dir.path().join("r1.md").exists());
}
