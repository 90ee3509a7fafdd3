//! Note-level n-gram metrics for scoring generated sequences against
//! references: per-n clipped BLEU precision, cumulative BLEU with
//! brevity penalty, and ROUGE-N. A token is a whole four-character
//! note; all functions are generic over the token type.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::text::{note_token, parse_stream, Diagnostic};

/// An ordered list of note tokens, the unit the metrics compare.
pub type TokenSequence = Vec<String>;

/// Strictly parse a stream and return its canonical tokens. Layout
/// (line breaks, spacing) does not affect the result.
pub fn tokenize(text: &str) -> Result<TokenSequence, Vec<Diagnostic>> {
    let score = parse_stream(text)?;
    Ok(score.notes.iter().map(|n| note_token(*n)).collect())
}

/// ROUGE-N scores; `f1` is 0 whenever precision and recall are both 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    const ZERO: RougeScore = RougeScore { precision: 0.0, recall: 0.0, f1: 0.0 };
}

fn ngram_counts<T: Eq + Hash>(tokens: &[T], n: usize) -> HashMap<&[T], usize> {
    let mut counts = HashMap::new();
    for gram in tokens.windows(n) {
        *counts.entry(gram).or_insert(0) += 1;
    }
    counts
}

/// Modified n-gram precision: each distinct candidate n-gram counts at
/// most as often as it appears in the most generous reference. A
/// candidate shorter than `n` scores 0.
pub fn bleu_ngram_precision<T, S>(candidate: &[T], references: &[S], n: usize) -> f64
where
    T: Eq + Hash,
    S: AsRef<[T]>,
{
    assert!(n >= 1, "n-gram order must be at least 1");
    if candidate.len() < n {
        return 0.0;
    }
    let candidate_counts = ngram_counts(candidate, n);
    let reference_counts: Vec<_> =
        references.iter().map(|r| ngram_counts(r.as_ref(), n)).collect();

    let mut clipped = 0;
    for (gram, count) in &candidate_counts {
        let allowed = reference_counts
            .iter()
            .map(|counts| counts.get(gram).copied().unwrap_or(0))
            .max()
            .unwrap_or(0);
        clipped += (*count).min(allowed);
    }
    clipped as f64 / (candidate.len() - n + 1) as f64
}

/// Geometric mean of the 1..=max_n precisions times the brevity
/// penalty `min(1, e^(1 - r/c))`, where `r` is the reference length
/// closest to the candidate's (ties to the shorter reference). Zero if
/// any per-n precision is zero.
pub fn bleu_cumulative<T, S>(candidate: &[T], references: &[S], max_n: usize) -> f64
where
    T: Eq + Hash,
    S: AsRef<[T]>,
{
    assert!(max_n >= 1, "n-gram order must be at least 1");
    if candidate.is_empty() || references.is_empty() {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let precision = bleu_ngram_precision(candidate, references, n);
        if precision == 0.0 {
            return 0.0;
        }
        log_sum += precision.ln();
    }
    let mean = (log_sum / max_n as f64).exp();

    let c = candidate.len();
    let r = references
        .iter()
        .map(|r| r.as_ref().len())
        .min_by_key(|&len| (len.abs_diff(c), len))
        .expect("references non-empty");
    let penalty = (1.0 - r as f64 / c as f64).exp().min(1.0);
    mean * penalty
}

/// ROUGE-N of a candidate against one reference: clipped n-gram
/// overlap over the reference count (recall) and over the candidate
/// count (precision), with their harmonic mean as f1.
pub fn rouge_n<T: Eq + Hash>(candidate: &[T], reference: &[T], n: usize) -> RougeScore {
    assert!(n >= 1, "n-gram order must be at least 1");
    if candidate.len() < n || reference.len() < n {
        return RougeScore::ZERO;
    }
    let candidate_counts = ngram_counts(candidate, n);
    let reference_counts = ngram_counts(reference, n);
    let overlap: usize = candidate_counts
        .iter()
        .map(|(gram, count)| (*count).min(reference_counts.get(gram).copied().unwrap_or(0)))
        .sum();

    let precision = overlap as f64 / (candidate.len() - n + 1) as f64;
    let recall = overlap as f64 / (reference.len() - n + 1) as f64;
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    RougeScore { precision, recall, f1 }
}
