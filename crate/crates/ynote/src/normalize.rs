//! Lenient repair for almost-valid streams. Where [`parse_stream`]
//! rejects, [`normalize`] substitutes the nearest legal spelling and
//! reports every changed character, so noisy generator output can be
//! funneled back into the strict grammar.
//!
//! Repair rules, applied per four-character window:
//!
//! 1. An invalid pitch letter empties the pitch field to the rest
//!    spelling `00`, except the two enharmonic snaps: `e` (E raised)
//!    becomes `F` in the same octave and `b` (B raised) becomes `C`
//!    one octave up, clamped at octave 9.
//! 2. A pitch letter with a non-digit octave keeps the letter and
//!    takes octave `4`.
//! 3. An unknown duration code becomes `04`, a plain quarter.
//! 4. A trailing fragment shorter than four characters is dropped.
//!
//! Whitespace passes through untouched, so repaired output lines up
//! with the input everywhere no edit applies.

use crate::text::{
    check_duration_field, check_pitch_field, is_stray, parse_stream, token_chars, DiagnosticKind,
};

/// One character-level change made by [`normalize`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edit {
    /// Byte offset of the replaced character in the original input.
    pub byte_offset: usize,
    /// The character that was there.
    pub old: char,
    /// The replacement, or `None` when the character was dropped.
    pub new: Option<char>,
    /// Which repair rule fired, in [`parse_stream`]'s terms.
    pub rule: DiagnosticKind,
}

impl std::fmt::Display for Edit {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.new {
            Some(new) => {
                write!(f, "{}: {}: {:?} -> {new:?}", self.byte_offset, self.rule, self.old)
            }
            None => write!(f, "{}: {}: {:?} dropped", self.byte_offset, self.rule, self.old),
        }
    }
}

/// Everything [`normalize`] did to an input.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RepairReport {
    pub edits: Vec<Edit>,
    /// Character count of the whole input, whitespace included.
    pub chars_total: usize,
}

impl RepairReport {
    pub fn chars_modified(&self) -> usize {
        self.edits.len()
    }

    pub fn is_clean(&self) -> bool {
        self.edits.is_empty()
    }

    /// Modified fraction of the input, 0.0 for empty input.
    pub fn ratio(&self) -> f64 {
        if self.chars_total == 0 {
            0.0
        } else {
            self.edits.len() as f64 / self.chars_total as f64
        }
    }

    /// One-line account, percentage truncated to one decimal place.
    pub fn summary(&self) -> String {
        let permille = if self.chars_total == 0 {
            0
        } else {
            self.edits.len() * 1000 / self.chars_total
        };
        format!(
            "modified {} of {} characters ({}.{}%)",
            self.edits.len(),
            self.chars_total,
            permille / 10,
            permille % 10
        )
    }
}

/// A repaired window character: the replacement and the rule, or `None`
/// where the original stands.
type FieldFix = [Option<(char, DiagnosticKind)>; 2];

fn octave_kind(octave: char) -> DiagnosticKind {
    if is_stray(octave) {
        DiagnosticKind::StrayCharacter
    } else {
        DiagnosticKind::BadOctave
    }
}

fn fix_pitch_field(letter: char, octave: char) -> FieldFix {
    let (kind, at) = match check_pitch_field(letter, octave) {
        Ok(_) => return [None, None],
        Err(e) => e,
    };
    if at == 1 {
        // the letter was fine, only the octave needs replacing
        return [None, Some(('4', kind))];
    }
    // from here on `kind` describes the letter
    let digit_octave = octave.is_ascii_digit();
    match letter {
        'e' => [
            Some(('F', kind)),
            (!digit_octave).then(|| ('4', octave_kind(octave))),
        ],
        'b' if digit_octave => {
            let up = if octave == '9' { '9' } else { (octave as u8 + 1) as char };
            [Some(('C', kind)), (up != octave).then_some((up, kind))]
        }
        'b' => [Some(('C', kind)), Some(('4', octave_kind(octave)))],
        _ => [
            (letter != '0').then_some(('0', kind)),
            match (octave, digit_octave) {
                ('0', _) => None,
                (_, true) => Some(('0', kind)),
                (_, false) => Some(('0', octave_kind(octave))),
            },
        ],
    }
}

fn fix_duration_field(a: char, b: char) -> FieldFix {
    if check_duration_field(a, b).is_ok() {
        return [None, None];
    }
    let kind_for = |c: char| {
        if is_stray(c) {
            DiagnosticKind::StrayCharacter
        } else {
            DiagnosticKind::BadDurationCode
        }
    };
    [
        (a != '0').then(|| ('0', kind_for(a))),
        (b != '4').then(|| ('4', kind_for(b))),
    ]
}

/// Repair an input stream. Returns the repaired text, which
/// [`parse_stream`] is guaranteed to accept, together with the edit
/// log. Running the result through `normalize` again changes nothing.
pub fn normalize(text: &str) -> (String, RepairReport) {
    let chars = token_chars(text);
    let mut edits = Vec::new();
    // input byte offset -> replacement (None = drop this character)
    let mut patch: std::collections::HashMap<usize, Option<char>> = std::collections::HashMap::new();

    for window in chars.chunks(4) {
        if window.len() < 4 {
            for p in window {
                patch.insert(p.offset, None);
                edits.push(Edit {
                    byte_offset: p.offset,
                    old: p.ch,
                    new: None,
                    rule: DiagnosticKind::TruncatedNote,
                });
            }
            continue;
        }
        let fixes = [
            fix_pitch_field(window[0].ch, window[1].ch),
            fix_duration_field(window[2].ch, window[3].ch),
        ];
        for (field, fix) in fixes.iter().enumerate() {
            for (i, slot) in fix.iter().enumerate() {
                if let Some((new, rule)) = slot {
                    let p = window[field * 2 + i];
                    patch.insert(p.offset, Some(*new));
                    edits.push(Edit { byte_offset: p.offset, old: p.ch, new: Some(*new), rule: *rule });
                }
            }
        }
    }

    let mut out = String::with_capacity(text.len());
    let mut total = 0usize;
    for (offset, ch) in text.char_indices() {
        total += 1;
        match patch.get(&offset) {
            Some(Some(new)) => out.push(*new),
            Some(None) => {}
            None => out.push(ch),
        }
    }

    edits.sort_by_key(|e| e.byte_offset);
    debug_assert!(parse_stream(&out).is_ok());
    (out, RepairReport { edits, chars_total: total })
}
