//! A small order-k Markov chain over note tokens: count every
//! k-context → next-note transition in a corpus, then sample
//! continuations proportionally to the counts. Sampling is driven by
//! a seeded stream cipher, so a given (model, prompt, length, seed)
//! always produces the same piece. Contexts never seen in training
//! fall back to progressively shorter suffixes, ending at the plain
//! next-note distribution.

use std::collections::{BTreeMap, BTreeSet};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::score::Note;
use crate::text::{note_token, parse_note};

type Distribution = BTreeMap<Note, u64>;
type CountTable = BTreeMap<Vec<Note>, Distribution>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovModel {
    order: usize,
    /// Transition counts keyed by full-length context.
    counts: CountTable,
    vocabulary: BTreeSet<Note>,
    /// Marginals of `counts` for context lengths order-1 down to 0,
    /// indexed by context length. Rebuilt, never persisted.
    backoff: Vec<CountTable>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrainError {
    #[error("training corpus is empty")]
    EmptyCorpus,
    #[error("sequence {index} has {len} note(s); an order-{order} model needs more than {order}")]
    SequenceTooShort { index: usize, len: usize, order: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("model has no transitions to sample from")]
    EmptyModel,
    #[error("target length {target} is shorter than the {prompt}-note prompt")]
    TargetShorterThanPrompt { target: usize, prompt: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelFormatError {
    #[error("model line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("model file has no order header")]
    MissingOrder,
}

impl MarkovModel {
    /// Count every (context, next) pair across the corpus. Every
    /// sequence must be longer than the order so it contributes at
    /// least one transition.
    pub fn train(corpus: &[Vec<Note>], order: usize) -> Result<MarkovModel, TrainError> {
        assert!(order >= 1, "model order must be at least 1");
        if corpus.is_empty() {
            return Err(TrainError::EmptyCorpus);
        }
        if let Some((index, sequence)) =
            corpus.iter().enumerate().find(|(_, s)| s.len() <= order)
        {
            return Err(TrainError::SequenceTooShort { index, len: sequence.len(), order });
        }

        let mut counts = CountTable::new();
        let mut vocabulary = BTreeSet::new();
        for sequence in corpus {
            vocabulary.extend(sequence.iter().copied());
            for window in sequence.windows(order + 1) {
                let (next, context) = window.split_last().expect("window non-empty");
                *counts
                    .entry(context.to_vec())
                    .or_default()
                    .entry(*next)
                    .or_insert(0) += 1;
            }
        }
        Ok(MarkovModel::assemble(order, counts, vocabulary))
    }

    fn assemble(order: usize, counts: CountTable, vocabulary: BTreeSet<Note>) -> MarkovModel {
        let mut backoff = vec![CountTable::new(); order];
        for length in (0..order).rev() {
            let level = if length + 1 == order { &counts } else { &backoff[length + 1] };
            let mut shorter = CountTable::new();
            for (context, distribution) in level {
                let entry = shorter.entry(context[context.len() - length..].to_vec()).or_default();
                for (&next, &count) in distribution {
                    *entry.entry(next).or_insert(0) += count;
                }
            }
            backoff[length] = shorter;
        }
        MarkovModel { order, counts, vocabulary, backoff }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn vocabulary(&self) -> &BTreeSet<Note> {
        &self.vocabulary
    }

    pub fn context_count(&self) -> usize {
        self.counts.len()
    }

    /// Extend the prompt to `target_notes` notes. The prompt is
    /// copied through unchanged; each further note is drawn from the
    /// longest known context, with the seed fixing the whole stream.
    pub fn generate(
        &self,
        prompt: &[Note],
        target_notes: usize,
        seed: u64,
    ) -> Result<Vec<Note>, GenerateError> {
        if target_notes < prompt.len() {
            return Err(GenerateError::TargetShorterThanPrompt {
                target: target_notes,
                prompt: prompt.len(),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = prompt.to_vec();
        while out.len() < target_notes {
            let longest = out.len().min(self.order);
            let next = (0..=longest)
                .rev()
                .find_map(|length| {
                    let table =
                        if length == self.order { &self.counts } else { &self.backoff[length] };
                    table.get(&out[out.len() - length..]).map(|d| sample(&mut rng, d))
                })
                .ok_or(GenerateError::EmptyModel)?;
            out.push(next);
        }
        Ok(out)
    }

    /// Serialize as line-oriented text: the order, each vocabulary
    /// token, then one `ngram <count> <context…> <next>` record per
    /// transition, all in sorted order.
    pub fn to_text(&self) -> String {
        let mut out = format!("order {}\n", self.order);
        for &note in &self.vocabulary {
            out.push_str(&format!("token {}\n", note_token(note)));
        }
        for (context, distribution) in &self.counts {
            for (&next, &count) in distribution {
                out.push_str(&format!("ngram {count}"));
                for &note in context {
                    out.push_str(&format!(" {}", note_token(note)));
                }
                out.push_str(&format!(" {}\n", note_token(next)));
            }
        }
        out
    }

    /// Parse the format written by [`to_text`]. Tokens that appear in
    /// ngram records join the vocabulary whether or not they were
    /// declared.
    pub fn from_text(text: &str) -> Result<MarkovModel, ModelFormatError> {
        let mut order = None;
        let mut counts = CountTable::new();
        let mut vocabulary = BTreeSet::new();

        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let fail = |message: String| ModelFormatError::Line { line, message };
            let fields: Vec<&str> = raw.split_whitespace().collect();
            match fields.split_first() {
                None => {}
                Some((&"order", rest)) => {
                    if order.is_some() {
                        return Err(fail("second order header".into()));
                    }
                    let value = match rest {
                        [value] => value.parse::<usize>().ok().filter(|&k| k >= 1),
                        _ => None,
                    };
                    order =
                        Some(value.ok_or_else(|| fail(format!("bad order in {raw:?}")))?);
                }
                Some((&"token", rest)) => {
                    let note = match rest {
                        [token] => parse_note(token).ok(),
                        _ => None,
                    };
                    vocabulary
                        .insert(note.ok_or_else(|| fail(format!("bad token in {raw:?}")))?);
                }
                Some((&"ngram", rest)) => {
                    let order = order.ok_or(ModelFormatError::MissingOrder)?;
                    let (count, tokens) = rest
                        .split_first()
                        .ok_or_else(|| fail("ngram record is empty".into()))?;
                    let count = count
                        .parse::<u64>()
                        .ok()
                        .filter(|&c| c > 0)
                        .ok_or_else(|| fail(format!("bad count {count:?}")))?;
                    if tokens.len() != order + 1 {
                        return Err(fail(format!(
                            "expected {} tokens for an order-{order} record, found {}",
                            order + 1,
                            tokens.len()
                        )));
                    }
                    let notes = tokens
                        .iter()
                        .map(|t| parse_note(t).map_err(|_| fail(format!("bad token {t:?}"))))
                        .collect::<Result<Vec<Note>, _>>()?;
                    vocabulary.extend(notes.iter().copied());
                    let (next, context) = notes.split_last().expect("record non-empty");
                    *counts
                        .entry(context.to_vec())
                        .or_default()
                        .entry(*next)
                        .or_insert(0) += count;
                }
                Some((other, _)) => {
                    return Err(fail(format!("unknown directive {other:?}")));
                }
            }
        }
        let order = order.ok_or(ModelFormatError::MissingOrder)?;
        Ok(MarkovModel::assemble(order, counts, vocabulary))
    }
}

fn sample(rng: &mut ChaCha8Rng, distribution: &Distribution) -> Note {
    let total: u64 = distribution.values().sum();
    let mut remaining = rng.random_range(0..total);
    for (&note, &count) in distribution {
        if remaining < count {
            return note;
        }
        remaining -= count;
    }
    unreachable!("counts sum to total")
}
