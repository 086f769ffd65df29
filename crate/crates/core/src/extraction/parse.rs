use serde_json::{Map, Value};

use super::{EntityType, ExtractionError, RawEntitySet};

/// Parses an LLM reply into raw entity groups.
///
/// The first JSON object anywhere in `raw` is used, so code fences and chatty
/// prefixes are tolerated. Top-level keys map onto [`EntityType`]; nested
/// objects and arrays contribute all their leaf strings to the parent key's
/// type.
pub fn parse_llm_response(raw: &str) -> Result<RawEntitySet, ExtractionError> {
    let obj = first_json_object(raw).ok_or(ExtractionError::NoJson)?;
    let mut set = RawEntitySet::default();
    for (key, value) in &obj {
        let etype = EntityType::from_response_key(key);
        let mut leaves = Vec::new();
        collect_strings(value, &mut leaves);
        for s in leaves {
            set.push(etype, s);
        }
    }
    if set.is_empty() {
        return Err(ExtractionError::NoEntities);
    }
    Ok(set)
}

fn first_json_object(raw: &str) -> Option<Map<String, Value>> {
    raw.match_indices('{').find_map(|(i, _)| {
        let mut stream = serde_json::Deserializer::from_str(&raw[i..]).into_iter::<Value>();
        match stream.next() {
            Some(Ok(Value::Object(m))) => Some(m),
            _ => None,
        }
    })
}

fn collect_strings(v: &Value, out: &mut Vec<String>) {
    match v {
        Value::String(s) => {
            let s = s.trim();
            if !s.is_empty() {
                out.push(s.to_string());
            }
        }
        Value::Array(xs) => xs.iter().for_each(|x| collect_strings(x, out)),
        Value::Object(m) => m.values().for_each(|x| collect_strings(x, out)),
        _ => {}
    }
}

/// Writes a raw set in the response shape `{"Skills": [...], ...}`.
pub fn serialize_raw(set: &RawEntitySet) -> String {
    let mut m = Map::new();
    for (etype, items) in &set.groups {
        if items.is_empty() {
            continue;
        }
        m.insert(
            etype.response_key().to_string(),
            Value::Array(items.iter().cloned().map(Value::String).collect()),
        );
    }
    Value::Object(m).to_string()
}
