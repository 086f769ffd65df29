use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{RankedRecommendation, RecommendError};
use crate::corpus::JobArea;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryMetrics {
    pub query_id: String,
    pub matches: usize,
    pub returned: usize,
    pub accuracy: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecMetrics {
    pub avg_accuracy: f64,
    pub avg_precision: f64,
    pub per_query: Vec<QueryMetrics>,
}

/// Accuracy is same-category hits over N; precision is hits over the number
/// of documents actually returned (0 when nothing was returned).
pub fn evaluate_recommendations(
    results: &[RankedRecommendation],
    labels: &BTreeMap<String, JobArea>,
) -> Result<RecMetrics, RecommendError> {
    let label = |id: &str| labels.get(id).copied().ok_or_else(|| RecommendError::MissingLabel(id.to_string()));
    let mut per_query = Vec::with_capacity(results.len());
    for r in results {
        let qid = r
            .query_id
            .clone()
            .ok_or_else(|| RecommendError::MissingLabel("<query without id>".into()))?;
        let want = label(&qid)?;
        let mut matches = 0;
        for item in &r.items {
            matches += usize::from(label(&item.doc_id)? == want);
        }
        let returned = r.items.len();
        per_query.push(QueryMetrics {
            query_id: qid,
            matches,
            returned,
            accuracy: if r.top_n == 0 { 0.0 } else { matches as f64 / r.top_n as f64 },
            precision: if returned == 0 { 0.0 } else { matches as f64 / returned as f64 },
        });
    }
    let mean = |f: fn(&QueryMetrics) -> f64| {
        if per_query.is_empty() {
            0.0
        } else {
            per_query.iter().map(f).sum::<f64>() / per_query.len() as f64
        }
    };
    Ok(RecMetrics {
        avg_accuracy: mean(|q| q.accuracy),
        avg_precision: mean(|q| q.precision),
        per_query,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    /// "2", "5", "10", "D" or "R".
    pub n: String,
    /// "Job Rec." or "Employee Rec."
    pub task: String,
    pub avg_accuracy: f64,
    pub avg_precision: f64,
}

impl Table1Row {
    pub fn new(n: impl Into<String>, task: impl Into<String>, m: &RecMetrics) -> Self {
        Table1Row {
            n: n.into(),
            task: task.into(),
            avg_accuracy: m.avg_accuracy,
            avg_precision: m.avg_precision,
        }
    }
}

pub fn table1_markdown(rows: &[Table1Row]) -> String {
    let mut s = String::from("| N | Task | Avg. Acc. | Avg. Prec. |\n|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(s, "| {} | {} | {:.3} | {:.3} |", r.n, r.task, r.avg_accuracy, r.avg_precision);
    }
    s
}

/// Reference numbers from the original (private) corpus, for side-by-side reports.
pub fn reference_table1() -> Vec<Table1Row> {
    [
        ("2", "Job Rec.", 0.668, 0.675),
        ("2", "Employee Rec.", 0.684, 0.685),
        ("5", "Job Rec.", 0.748, 0.764),
        ("5", "Employee Rec.", 0.784, 0.792),
        ("10", "Job Rec.", 0.702, 0.700),
        ("10", "Employee Rec.", 0.715, 0.708),
        ("D", "Job Rec.", 0.670, 0.655),
        ("D", "Employee Rec.", 0.620, 0.665),
        ("R", "Job Rec.", 0.323, 0.312),
        ("R", "Employee Rec.", 0.373, 0.361),
    ]
    .into_iter()
    .map(|(n, task, a, p)| Table1Row {
        n: n.into(),
        task: task.into(),
        avg_accuracy: a,
        avg_precision: p,
    })
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recommend::{Method, RecItem};

    fn rec(q: &str, n: usize, ids: &[&str]) -> RankedRecommendation {
        RankedRecommendation {
            query_id: Some(q.into()),
            method: Method::Direct,
            top_n: n,
            items: ids
                .iter()
                .map(|id| RecItem {
                    doc_id: id.to_string(),
                    score: 1.0,
                    matched_entities: vec!["x".into()],
                    via_entities: vec![],
                })
                .collect(),
        }
    }

    fn labels() -> BTreeMap<String, JobArea> {
        use JobArea::*;
        [
            ("q", Sales),
            ("s1", Sales),
            ("s2", Sales),
            ("f", Finance),
            ("s3", Sales),
            ("a", Accountant),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    #[test]
    fn per_slot_accuracy() {
        let m = evaluate_recommendations(&[rec("q", 5, &["s1", "s2", "f", "s3", "a"])], &labels()).unwrap();
        assert!((m.avg_accuracy - 0.6).abs() < 1e-12);
        assert!((m.avg_precision - 0.6).abs() < 1e-12);
    }

    #[test]
    fn short_lists_and_empty() {
        let m = evaluate_recommendations(&[rec("q", 5, &["s1", "s2"]), rec("q", 5, &[])], &labels()).unwrap();
        assert_eq!(m.per_query[0].accuracy, 0.4);
        assert_eq!(m.per_query[0].precision, 1.0);
        assert_eq!((m.per_query[1].accuracy, m.per_query[1].precision), (0.0, 0.0));
        assert!((m.avg_accuracy - 0.2).abs() < 1e-12);
        assert!((m.avg_precision - 0.5).abs() < 1e-12);
    }

    #[test]
    fn missing_label_is_error() {
        let err = evaluate_recommendations(&[rec("q", 2, &["nobody"])], &labels()).unwrap_err();
        assert!(matches!(err, RecommendError::MissingLabel(ref id) if id == "nobody"));
    }

    #[test]
    fn table_layout() {
        let md = table1_markdown(&reference_table1());
        let lines: Vec<&str> = md.lines().collect();
        assert_eq!(lines[0], "| N | Task | Avg. Acc. | Avg. Prec. |");
        assert_eq!(lines[4], "| 5 | Job Rec. | 0.748 | 0.764 |");
        assert_eq!(lines.len(), 12);
    }
}
