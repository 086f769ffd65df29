//! Builds the extraction prompt for a document and parses a model reply.
//!
//! With `OPENAI_API_KEY` set, `--live` sends the prompt to the configured endpoint.

use talentgraph::extraction::{build_prompt, extract_llm, parse_llm_response, refine, LlmClient, LlmConfig, RefineConfig};
use talentgraph::{DocKind, Document};

const REPLY: &str = r#"Here are the entities:
```json
{"Skills": ["Python", "SQL", "Communication"],
 "Education": ["BSc Computer Science"],
 "Experience": {"Roles": ["Data Analyst"], "Tools": ["Tableau"]}}
```"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = Document::new("jd-7", DocKind::Jd, "Data analyst wanted. Python and SQL required, Tableau a plus.");
    println!("{}\n", build_prompt(&doc));

    let mut raw = parse_llm_response(REPLY)?;
    raw.doc_id = doc.id.clone();
    let set = refine(&raw, &RefineConfig::default());
    println!("parsed {} entities:", set.len());
    for e in &set.entities {
        println!("  {:?} {}", e.etype, e.canonical);
    }

    if std::env::args().any(|a| a == "--live") {
        let client = LlmClient::from_env(LlmConfig::default())?;
        let live = extract_llm(&doc, &client)?;
        println!("live reply: {:?}", live.groups);
    }
    Ok(())
}
