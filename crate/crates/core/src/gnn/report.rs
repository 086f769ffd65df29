use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::train::ClsMetrics;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table2Row {
    pub model: String,
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
}

impl Table2Row {
    pub fn new(model: impl Into<String>, m: &ClsMetrics) -> Self {
        Table2Row {
            model: model.into(),
            accuracy: m.accuracy,
            precision: m.precision,
            recall: m.recall,
        }
    }
}

pub fn table2_markdown(rows: &[Table2Row]) -> String {
    let mut s = String::from("| Model | Accuracy | Precision | Recall |\n|---|---|---|---|\n");
    for r in rows {
        let _ = writeln!(s, "| {} | {:.3} | {:.3} | {:.3} |", r.model, r.accuracy, r.precision, r.recall);
    }
    s
}

pub fn table2_csv(rows: &[Table2Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["Model", "Accuracy", "Precision", "Recall"]).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.model.clone(),
            format!("{:.6}", r.accuracy),
            format!("{:.6}", r.precision),
            format!("{:.6}", r.recall),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}

/// Reference numbers from the original (private) corpus, for side-by-side reports.
pub fn reference_table2() -> Vec<Table2Row> {
    [
        ("Tfidf+LogR.", 0.745, 0.770, 0.740),
        ("Tfidf+DecT.", 0.655, 0.670, 0.655),
        ("Tfidf+RF", 0.680, 0.675, 0.680),
        ("Tfidf+GBC", 0.775, 0.805, 0.775),
        ("Tfidf+MLP", 0.655, 0.670, 0.655),
        ("Transformer", 0.660, 0.645, 0.675),
        ("GCN", 0.785, 0.800, 0.795),
        ("GAT", 0.775, 0.835, 0.775),
    ]
    .into_iter()
    .map(|(m, a, p, r)| Table2Row {
        model: m.into(),
        accuracy: a,
        precision: p,
        recall: r,
    })
    .collect()
}
