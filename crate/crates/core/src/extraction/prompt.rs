use crate::corpus::{DocKind, Document};

pub const CV_PLACEHOLDER: &str = "<Insert CV text here>";
pub const JD_PLACEHOLDER: &str = "<Insert job description text here>";

/// Extraction prompt for CVs; the document text replaces [`CV_PLACEHOLDER`].
pub const CV_PROMPT: &str = "You are an entity extraction expert, you can identify and extract different types of entities from a text. Here is some information from a CV. Your task is to find and enlist all the information entities like education (degree, grade, school name), skills (which skills the person has), qualifications (skills), experience (action verb and nouns), and any other helpful token that is important for a job, and share them in a list where entities are separated by commas. Do not write anything else. Just the small entities separated by commas in a dictionary (JSON). Each entity can have only 1-2 words.\n<Insert CV text here>";

/// Extraction prompt for job descriptions; the text replaces [`JD_PLACEHOLDER`].
pub const JD_PROMPT: &str = "You are an entity extraction expert, you can identify and extract different types of entities from a text. Here is some information from a job description. Your task is to find and enlist all the information entities like education (degree requirement), skills (which skills the job needs), qualifications (skills), experience (action verb and nouns), and any other helpful token that is important for a job, and share them in a list where entities are separated by commas. Do not write anything else. Just the small entities separated by commas in a dictionary (JSON). Each entity can have only 1-2 words.\n<Insert job description text here>";

/// Fills the kind-specific template with the document text.
pub fn build_prompt(doc: &Document) -> String {
    let (template, marker) = match doc.kind {
        DocKind::Cv => (CV_PROMPT, CV_PLACEHOLDER),
        DocKind::Jd => (JD_PROMPT, JD_PLACEHOLDER),
    };
    template.replacen(marker, &doc.text, 1)
}
