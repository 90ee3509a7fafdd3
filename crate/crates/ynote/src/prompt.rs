//! Prompt extraction: reduce a piece to the short note sequence used
//! to seed generation, either the opening bar or the first and last
//! note of every bar. Bars are 4/4, so a new bar starts at every
//! multiple of 3840 half ticks of onset time.

use thiserror::Error;

use crate::score::{Note, Score, BAR_HALF_TICKS};

/// Which reduction to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptMode {
    FirstBar,
    BarEndpoints,
}

/// The extracted seed sequence together with the mode that produced
/// it. Never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prompt {
    pub mode: PromptMode,
    pub notes: Vec<Note>,
}

impl Prompt {
    pub fn tokens(&self) -> Vec<String> {
        self.notes.iter().map(|n| n.to_string()).collect()
    }

    /// The prompt as stream text, ready to write out or feed back in.
    pub fn to_text(&self) -> String {
        crate::text::serialize(&Score::new(self.notes.clone()))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PromptError {
    #[error("cannot extract a prompt from an empty score")]
    EmptyScore,
}

/// Every note whose onset falls inside the first bar. A note that
/// starts inside the bar and runs past its end still counts, so the
/// prompt always has at least one note.
pub fn extract_first_bar(score: &Score) -> Result<Prompt, PromptError> {
    if score.notes.is_empty() {
        return Err(PromptError::EmptyScore);
    }
    let mut onset = 0u64;
    let mut notes = Vec::new();
    for &note in &score.notes {
        if onset >= BAR_HALF_TICKS {
            break;
        }
        notes.push(note);
        onset += u64::from(note.duration.half_ticks());
    }
    Ok(Prompt { mode: PromptMode::FirstBar, notes })
}

/// The first and last note of every bar that has any onset in it, in
/// order. A bar with a single onset contributes that note once.
pub fn extract_bar_endpoints(score: &Score) -> Result<Prompt, PromptError> {
    if score.notes.is_empty() {
        return Err(PromptError::EmptyScore);
    }
    let mut onset = 0u64;
    let mut labeled = Vec::with_capacity(score.notes.len());
    for &note in &score.notes {
        labeled.push((onset / BAR_HALF_TICKS, note));
        onset += u64::from(note.duration.half_ticks());
    }

    let mut notes = Vec::new();
    let mut i = 0;
    while i < labeled.len() {
        let mut j = i;
        while j + 1 < labeled.len() && labeled[j + 1].0 == labeled[i].0 {
            j += 1;
        }
        notes.push(labeled[i].1);
        if j > i {
            notes.push(labeled[j].1);
        }
        i = j + 1;
    }
    Ok(Prompt { mode: PromptMode::BarEndpoints, notes })
}

pub fn extract(score: &Score, mode: PromptMode) -> Result<Prompt, PromptError> {
    match mode {
        PromptMode::FirstBar => extract_first_bar(score),
        PromptMode::BarEndpoints => extract_bar_endpoints(score),
    }
}
