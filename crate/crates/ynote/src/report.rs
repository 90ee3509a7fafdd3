//! Per-sample evaluation records and the summary table built from
//! them: one BLEU block (1-gram through 4-gram precision) and one
//! ROUGE block (1-gram and 2-gram F1), one row per sample.

use serde::{Deserialize, Serialize};

use crate::metrics::RougeScore;

/// Scores for one candidate sample. `bleu[i]` holds the (i + 1)-gram
/// clipped precision; `repair_ratio` is the share of characters the
/// normalizer changed before scoring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalRecord {
    pub sample: String,
    pub bleu: [f64; 4],
    pub rouge_1: RougeScore,
    pub rouge_2: RougeScore,
    pub repair_ratio: f64,
}

const VALUE_WIDTH: usize = 8;

fn header(out: &mut String, label_width: usize, columns: &[&str]) {
    out.push_str(&" ".repeat(label_width));
    for column in columns {
        out.push_str(&format!("{column:>VALUE_WIDTH$}"));
    }
    out.push('\n');
}

fn row(out: &mut String, label: &str, label_width: usize, values: &[f64]) {
    out.push_str(&format!("{label:<label_width$}"));
    for value in values {
        out.push_str(&format!("{value:>VALUE_WIDTH$.3}"));
    }
    out.push('\n');
}

/// Render both score blocks as plain text, three decimals per value.
pub fn render_table(records: &[EvalRecord]) -> String {
    let label_width = records
        .iter()
        .map(|r| r.sample.chars().count())
        .max()
        .unwrap_or(0)
        .max("Sample".len())
        + 2;

    let mut out = String::new();
    out.push_str("BLEU\n");
    header(&mut out, label_width, &["1-gram", "2-gram", "3-gram", "4-gram"]);
    for record in records {
        row(&mut out, &record.sample, label_width, &record.bleu);
    }
    out.push('\n');
    out.push_str("ROUGE (F1)\n");
    header(&mut out, label_width, &["1-gram", "2-gram"]);
    for record in records {
        row(&mut out, &record.sample, label_width, &[record.rouge_1.f1, record.rouge_2.f1]);
    }
    out
}

/// Serialize records one JSON object per line.
pub fn to_jsonl(records: &[EvalRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Parse records written by [`to_jsonl`]; blank lines are skipped.
pub fn from_jsonl(text: &str) -> Result<Vec<EvalRecord>, serde_json::Error> {
    text.lines()
        .filter(|line| !line.trim().is_empty())
        .map(serde_json::from_str)
        .collect()
}
