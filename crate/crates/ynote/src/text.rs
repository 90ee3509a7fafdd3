//! The text grammar: every note is exactly four characters, two for the
//! pitch field and two for the duration code. ASCII whitespace between
//! tokens is ignored on input; the canonical writer emits single-space
//! separated tokens, sixteen per line.

use std::fmt;

use crate::duration::Duration;
use crate::pitch::{Pitch, PitchClass};
use crate::score::{Note, Score};

/// Notes per line in the canonical layout.
pub const NOTES_PER_LINE: usize = 16;

/// What went wrong at one position of an input stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticKind {
    BadPitchLetter,
    BadOctave,
    BadDurationCode,
    TruncatedNote,
    StrayCharacter,
}

impl DiagnosticKind {
    pub const fn name(self) -> &'static str {
        match self {
            DiagnosticKind::BadPitchLetter => "bad_pitch_letter",
            DiagnosticKind::BadOctave => "bad_octave",
            DiagnosticKind::BadDurationCode => "bad_duration_code",
            DiagnosticKind::TruncatedNote => "truncated_note",
            DiagnosticKind::StrayCharacter => "stray_character",
        }
    }
}

impl fmt::Display for DiagnosticKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A positioned parse problem. Offsets are byte offsets into the
/// original input; diagnostics come out sorted by offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub byte_offset: usize,
    pub length: usize,
    pub kind: DiagnosticKind,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.byte_offset, self.kind, self.message)
    }
}

/// Render a note as its four-character token.
pub fn note_token(note: Note) -> String {
    let mut token = String::with_capacity(4);
    match note.pitch {
        Pitch::Rest => token.push_str("00"),
        Pitch::Pitched { class, octave } => {
            token.push(class.letter());
            token.push(char::from(b'0' + octave));
        }
    }
    let [a, b] = note.duration.code();
    token.push(a);
    token.push(b);
    token
}

impl fmt::Display for Note {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&note_token(*self))
    }
}

/// Parse a single four-character token.
pub fn parse_note(token: &str) -> Result<Note, DiagnosticKind> {
    let chars: Vec<char> = token.chars().collect();
    if chars.len() != 4 {
        return Err(DiagnosticKind::TruncatedNote);
    }
    let pitch = parse_pitch_field(chars[0], chars[1])?;
    let duration =
        Duration::from_code([chars[2], chars[3]]).ok_or(DiagnosticKind::BadDurationCode)?;
    Ok(Note::new(pitch, duration))
}

fn parse_pitch_field(letter: char, octave: char) -> Result<Pitch, DiagnosticKind> {
    if letter == '0' && octave == '0' {
        return Ok(Pitch::Rest);
    }
    let class = PitchClass::from_letter(letter).ok_or(DiagnosticKind::BadPitchLetter)?;
    if !octave.is_ascii_digit() {
        return Err(DiagnosticKind::BadOctave);
    }
    Ok(Pitch::Pitched { class, octave: octave as u8 - b'0' })
}

/// One non-whitespace character with its byte offset in the input.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Positioned {
    pub offset: usize,
    pub ch: char,
}

/// The token characters of an input: everything except ASCII whitespace,
/// in order, with original byte offsets.
pub(crate) fn token_chars(text: &str) -> Vec<Positioned> {
    text.char_indices()
        .filter(|(_, c)| !c.is_ascii_whitespace())
        .map(|(offset, ch)| Positioned { offset, ch })
        .collect()
}

pub(crate) fn is_stray(c: char) -> bool {
    !(' '..='~').contains(&c)
}

/// Classify the pitch field of one window; on failure returns the
/// diagnostic kind plus the index (0 or 1) of the offending character.
pub(crate) fn check_pitch_field(letter: char, octave: char) -> Result<Pitch, (DiagnosticKind, usize)> {
    match parse_pitch_field(letter, octave) {
        Ok(p) => Ok(p),
        Err(DiagnosticKind::BadOctave) => {
            let kind = if is_stray(octave) {
                DiagnosticKind::StrayCharacter
            } else {
                DiagnosticKind::BadOctave
            };
            Err((kind, 1))
        }
        Err(_) => {
            let kind = if is_stray(letter) {
                DiagnosticKind::StrayCharacter
            } else {
                DiagnosticKind::BadPitchLetter
            };
            Err((kind, 0))
        }
    }
}

/// Classify the duration field of one window.
pub(crate) fn check_duration_field(a: char, b: char) -> Result<Duration, (DiagnosticKind, usize)> {
    if let Some(d) = Duration::from_code([a, b]) {
        return Ok(d);
    }
    if is_stray(a) {
        Err((DiagnosticKind::StrayCharacter, 0))
    } else if is_stray(b) {
        Err((DiagnosticKind::StrayCharacter, 1))
    } else {
        Err((DiagnosticKind::BadDurationCode, 0))
    }
}

/// Strict parse: whitespace-separated four-character tokens, all
/// diagnostics collected. Any diagnostic fails the parse; the lenient
/// path is [`normalize`](crate::normalize::normalize).
pub fn parse_stream(text: &str) -> Result<Score, Vec<Diagnostic>> {
    let chars = token_chars(text);
    let mut notes = Vec::new();
    let mut diagnostics = Vec::new();

    for window in chars.chunks(4) {
        if window.len() < 4 {
            let offset = window[0].offset;
            let length: usize = window.iter().map(|p| p.ch.len_utf8()).sum();
            diagnostics.push(Diagnostic {
                byte_offset: offset,
                length,
                kind: DiagnosticKind::TruncatedNote,
                message: format!("input ends mid-token ({} of 4 characters)", window.len()),
            });
            continue;
        }
        let pitch = match check_pitch_field(window[0].ch, window[1].ch) {
            Ok(p) => Some(p),
            Err((kind, at)) => {
                let bad = window[at];
                diagnostics.push(Diagnostic {
                    byte_offset: bad.offset,
                    length: bad.ch.len_utf8(),
                    kind,
                    message: match kind {
                        DiagnosticKind::BadOctave => {
                            format!("{:?} is not an octave digit", bad.ch)
                        }
                        DiagnosticKind::StrayCharacter => {
                            format!("{:?} cannot appear in a note", bad.ch)
                        }
                        _ => format!("{:?} is not a pitch letter", bad.ch),
                    },
                });
                None
            }
        };
        let duration = match check_duration_field(window[2].ch, window[3].ch) {
            Ok(d) => Some(d),
            Err((kind, at)) => {
                let (offset, length, message) = if kind == DiagnosticKind::StrayCharacter {
                    let bad = window[2 + at];
                    (bad.offset, bad.ch.len_utf8(), format!("{:?} cannot appear in a note", bad.ch))
                } else {
                    (
                        window[2].offset,
                        window[2].ch.len_utf8() + window[3].ch.len_utf8(),
                        format!("{:?}{:?} is not a duration code", window[2].ch, window[3].ch),
                    )
                };
                diagnostics.push(Diagnostic { byte_offset: offset, length, kind, message });
                None
            }
        };
        if let (Some(pitch), Some(duration)) = (pitch, duration) {
            notes.push(Note::new(pitch, duration));
        }
    }

    if diagnostics.is_empty() {
        Ok(Score::new(notes))
    } else {
        Err(diagnostics)
    }
}

/// Canonical writer: four-character tokens separated by single spaces,
/// sixteen notes per line, every line newline-terminated. The empty
/// score serializes to the empty string.
pub fn serialize(score: &Score) -> String {
    let mut out = String::with_capacity(score.notes.len() * 5 + 1);
    for (i, note) in score.notes.iter().enumerate() {
        if i % NOTES_PER_LINE != 0 {
            out.push(' ');
        }
        out.push_str(&note_token(*note));
        if i % NOTES_PER_LINE == NOTES_PER_LINE - 1 {
            out.push('\n');
        }
    }
    if score.notes.len() % NOTES_PER_LINE != 0 {
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duration::{DurationBase, DurationModifier};

    fn note(token: &str) -> Note {
        parse_note(token).unwrap()
    }

    #[test]
    fn parses_middle_c_quarter() {
        let n = note("C404");
        assert_eq!(n.pitch, Pitch::Pitched { class: PitchClass::C, octave: 4 });
        assert_eq!(n.duration, Duration::plain(DurationBase::Quarter));
    }

    #[test]
    fn parses_whole_rest() {
        let n = note("0001");
        assert!(n.pitch.is_rest());
        assert_eq!(n.duration, Duration::plain(DurationBase::Whole));
    }

    #[test]
    fn parses_dotted_sharp() {
        let n = note("c54.");
        assert_eq!(n.pitch, Pitch::Pitched { class: PitchClass::CSharp, octave: 5 });
        assert_eq!(n.duration, Duration::new(DurationBase::Quarter, DurationModifier::Dotted));
    }

    #[test]
    fn rejects_lowercase_e_and_b() {
        assert_eq!(parse_note("e404"), Err(DiagnosticKind::BadPitchLetter));
        assert_eq!(parse_note("b404"), Err(DiagnosticKind::BadPitchLetter));
    }

    #[test]
    fn rejects_bad_fields() {
        assert_eq!(parse_note("CX04"), Err(DiagnosticKind::BadOctave));
        assert_eq!(parse_note("C4ZZ"), Err(DiagnosticKind::BadDurationCode));
        assert_eq!(parse_note("C40"), Err(DiagnosticKind::TruncatedNote));
        // "0" alone is not a pitch letter; only the full "00" field is a rest
        assert_eq!(parse_note("0104"), Err(DiagnosticKind::BadPitchLetter));
    }

    #[test]
    fn tokens_are_four_chars_and_round_trip() {
        for token in ["C404", "0001", "c54.", "A98:", "d2U3", "g0S3", "00U:"] {
            let n = note(token);
            assert_eq!(note_token(n), token);
            assert_eq!(note_token(n).len(), 4);
        }
    }

    #[test]
    fn stream_parses_with_whitespace() {
        let s = parse_stream("C404 D404").unwrap();
        assert_eq!(s.notes.len(), 2);
        let s2 = parse_stream(" C404\n\tD404 \r\n").unwrap();
        assert_eq!(s2.notes, s.notes);
    }

    #[test]
    fn truncated_stream_reports_offset_zero() {
        let d = parse_stream("C40").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].byte_offset, 0);
        assert_eq!(d[0].kind, DiagnosticKind::TruncatedNote);
    }

    #[test]
    fn bad_letter_mid_stream_reports_its_offset() {
        let d = parse_stream("C404X404").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].byte_offset, 4);
        assert_eq!(d[0].kind, DiagnosticKind::BadPitchLetter);
    }

    #[test]
    fn diagnostics_are_aggregated_and_sorted() {
        let d = parse_stream("e404 C4ZZ X9").unwrap_err();
        assert_eq!(d.len(), 3);
        assert!(d.windows(2).all(|w| w[0].byte_offset <= w[1].byte_offset));
        assert_eq!(d[0].kind, DiagnosticKind::BadPitchLetter);
        assert_eq!(d[1].kind, DiagnosticKind::BadDurationCode);
        assert_eq!(d[1].byte_offset, 7);
        assert_eq!(d[2].kind, DiagnosticKind::TruncatedNote);
        assert_eq!(d[2].byte_offset, 10);
    }

    #[test]
    fn stray_characters_get_their_own_kind() {
        let d = parse_stream("C4\u{7f}4").unwrap_err();
        assert_eq!(d[0].kind, DiagnosticKind::StrayCharacter);
        let d = parse_stream("é404").unwrap_err();
        assert_eq!(d[0].kind, DiagnosticKind::StrayCharacter);
        assert_eq!(d[0].length, 2);
    }

    #[test]
    fn serialize_layout() {
        let a4 = note("A404");
        assert_eq!(serialize(&Score::new(vec![a4])), "A404\n");
        assert_eq!(serialize(&Score::default()), "");

        let seventeen = Score::new(vec![a4; 17]);
        let text = serialize(&seventeen);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0].split(' ').count(), 16);
        assert_eq!(lines[1], "A404");
        assert!(text.ends_with('\n'));

        let sixteen = Score::new(vec![a4; 16]);
        assert_eq!(serialize(&sixteen).lines().count(), 1);
    }

    #[test]
    fn serialize_then_parse_is_identity() {
        let tokens = ["C404", "0001", "c54.", "A98:", "a1U3", "g0S3", "d216", "F732"];
        let score = Score::new(tokens.iter().map(|t| note(t)).collect());
        let reparsed = parse_stream(&serialize(&score)).unwrap();
        assert_eq!(reparsed, score);
    }
}
