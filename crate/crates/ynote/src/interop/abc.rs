//! ABC import for a deliberately small subset: key of C only, the L:
//! unit note length, melody letters with octave marks and per-note
//! accidentals, length multipliers and divisors, and rests. Bar lines
//! are ignored. Anything else, including any duration with no exact
//! legal equivalent, is an error; this importer never quantizes.

use thiserror::Error;

use crate::duration::Duration;
use crate::pitch::{Pitch, PitchClass};
use crate::score::{Note, Score};

use super::{LossReport, SourceFormat};

/// Half-ticks in a whole note, the reference for L: fractions.
const WHOLE_HALF_TICKS: u64 = 3840;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbcImportError {
    #[error("the tune has no K: key header")]
    MissingKey,
    #[error("unsupported key {0:?}; only K:C is accepted")]
    UnsupportedKey(String),
    #[error("unsupported construct at offset {offset}: {message}")]
    UnsupportedConstruct { offset: usize, message: String },
    #[error("no exact duration for {0}")]
    UnrepresentableDuration(String),
    #[error("pitch out of range: {0}")]
    UnrepresentablePitch(String),
}

impl AbcImportError {
    /// Stable short name for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            AbcImportError::MissingKey => "missing-key",
            AbcImportError::UnsupportedKey(_) => "unsupported-key",
            AbcImportError::UnsupportedConstruct { .. } => "unsupported-construct",
            AbcImportError::UnrepresentableDuration(_) => "unrepresentable-duration",
            AbcImportError::UnrepresentablePitch(_) => "unrepresentable-pitch",
        }
    }
}

/// Parse an ABC tune into a score.
///
/// The header must carry `K:C`; an `L:` field sets the unit note
/// length, defaulting to 1/8. In the body, uppercase letters sit in
/// the octave of middle C and lowercase one octave higher, each `,`
/// lowers an octave and each `'` raises one, and `^` `_` `=` sharpen,
/// flatten, or leave a single following note. Flats land on the
/// enharmonic raised class below. The report is always lossless
/// because unsupported input fails instead of degrading.
pub fn abc_import(text: &str) -> Result<(Score, LossReport), AbcImportError> {
    let mut unit: (u64, u64) = (1, 8);
    let mut body = None;
    let mut offset = 0;

    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            offset += line.len();
            continue;
        }
        let field = trimmed
            .split_once(':')
            .filter(|(name, _)| name.len() == 1 && name.chars().all(|c| c.is_ascii_alphabetic()));
        let Some((name, value)) = field else {
            return Err(AbcImportError::UnsupportedConstruct {
                offset,
                message: format!("{trimmed:?} is not a header field"),
            });
        };
        let value = value.trim();
        match name {
            "K" => {
                if value != "C" {
                    return Err(AbcImportError::UnsupportedKey(value.to_string()));
                }
                body = Some(offset + line.len());
                break;
            }
            "L" => unit = parse_unit(value, offset)?,
            _ => {}
        }
        offset += line.len();
    }

    let body_start = body.ok_or(AbcImportError::MissingKey)?;
    let notes = parse_body(&text[body_start.min(text.len())..], body_start, unit)?;
    Ok((Score::new(notes), LossReport::new(SourceFormat::Abc)))
}

fn parse_unit(value: &str, offset: usize) -> Result<(u64, u64), AbcImportError> {
    let bad = || AbcImportError::UnsupportedConstruct {
        offset,
        message: format!("{value:?} is not a unit note length"),
    };
    let (num, den) = value.split_once('/').ok_or_else(bad)?;
    let num: u64 = num.trim().parse().map_err(|_| bad())?;
    let den: u64 = den.trim().parse().map_err(|_| bad())?;
    if num == 0 || den == 0 {
        return Err(bad());
    }
    Ok((num, den))
}

fn parse_body(
    body: &str,
    base_offset: usize,
    unit: (u64, u64),
) -> Result<Vec<Note>, AbcImportError> {
    let mut notes = Vec::new();
    let mut chars = body.char_indices().peekable();

    while let Some(&(at, c)) = chars.peek() {
        let offset = base_offset + at;
        match c {
            _ if c.is_ascii_whitespace() => {
                chars.next();
            }
            '%' => {
                for (_, c) in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '|' => {
                chars.next();
                if chars.peek().is_some_and(|&(_, c)| c == ':') {
                    return Err(AbcImportError::UnsupportedConstruct {
                        offset,
                        message: "repeats are not supported".into(),
                    });
                }
            }
            ':' => {
                return Err(AbcImportError::UnsupportedConstruct {
                    offset,
                    message: "repeats are not supported".into(),
                });
            }
            '^' | '_' | '=' => {
                chars.next();
                let alter = match c {
                    '^' => 1,
                    '_' => -1,
                    _ => 0,
                };
                match chars.peek() {
                    Some(&(_, letter)) if is_pitch_letter(letter) => {
                        chars.next();
                        notes.push(read_note(&mut chars, letter, alter, offset, unit)?);
                    }
                    _ => {
                        return Err(AbcImportError::UnsupportedConstruct {
                            offset,
                            message: format!("accidental {c:?} must be followed by a note letter"),
                        });
                    }
                }
            }
            _ if is_pitch_letter(c) => {
                chars.next();
                notes.push(read_note(&mut chars, c, 0, offset, unit)?);
            }
            'z' => {
                chars.next();
                let duration = read_duration(&mut chars, offset, unit)?;
                notes.push(Note::rest(duration));
            }
            _ => {
                return Err(AbcImportError::UnsupportedConstruct {
                    offset,
                    message: format!("{c:?} is not part of the supported subset"),
                });
            }
        }
    }
    Ok(notes)
}

fn is_pitch_letter(c: char) -> bool {
    matches!(c, 'A'..='G' | 'a'..='g')
}

type Chars<'a> = std::iter::Peekable<std::str::CharIndices<'a>>;

fn read_note(
    chars: &mut Chars,
    letter: char,
    alter: i32,
    offset: usize,
    unit: (u64, u64),
) -> Result<Note, AbcImportError> {
    let mut octave: i32 = if letter.is_ascii_uppercase() { 4 } else { 5 };
    let semitone = match letter.to_ascii_uppercase() {
        'C' => 0,
        'D' => 2,
        'E' => 4,
        'F' => 5,
        'G' => 7,
        'A' => 9,
        _ => 11,
    };
    while let Some(&(_, mark)) = chars.peek() {
        match mark {
            ',' => octave -= 1,
            '\'' => octave += 1,
            _ => break,
        }
        chars.next();
    }

    let index = 12 * (octave + 1) + semitone + alter;
    let class = PitchClass::from_semitone(index.rem_euclid(12) as u8).expect("semitone below 12");
    let octave = index.div_euclid(12) - 1;
    let pitch = u8::try_from(octave)
        .ok()
        .and_then(|o| Pitch::pitched(class, o))
        .ok_or_else(|| {
            AbcImportError::UnrepresentablePitch(format!(
                "note at offset {offset} lands in octave {octave}"
            ))
        })?;

    let duration = read_duration(chars, offset, unit)?;
    Ok(Note::new(pitch, duration))
}

/// Read the optional length suffix: digits, `/digits`, `digits/digits`,
/// or a bare `/` meaning half.
fn read_duration(
    chars: &mut Chars,
    offset: usize,
    unit: (u64, u64),
) -> Result<Duration, AbcImportError> {
    let mut numerator = u128::from(read_number(chars).unwrap_or(1));
    let mut denominator: u128 = 1;
    if chars.peek().is_some_and(|&(_, c)| c == '/') {
        chars.next();
        denominator = u128::from(read_number(chars).unwrap_or(2));
    }
    numerator *= u128::from(unit.0);
    denominator *= u128::from(unit.1);
    let shared = gcd(numerator, denominator);
    numerator /= shared;
    denominator /= shared;

    let describe = || {
        format!("{numerator}/{denominator} of a whole note at offset {offset}")
    };
    if u128::from(WHOLE_HALF_TICKS) * numerator % denominator != 0 {
        return Err(AbcImportError::UnrepresentableDuration(describe()));
    }
    u32::try_from(u128::from(WHOLE_HALF_TICKS) * numerator / denominator)
        .ok()
        .and_then(Duration::from_half_ticks)
        .ok_or_else(|| AbcImportError::UnrepresentableDuration(describe()))
}

fn read_number(chars: &mut Chars) -> Option<u64> {
    let mut value: Option<u64> = None;
    while let Some(&(_, c)) = chars.peek() {
        let Some(digit) = c.to_digit(10) else { break };
        let grown = value.unwrap_or(0).saturating_mul(10).saturating_add(u64::from(digit));
        value = Some(grown);
        chars.next();
    }
    value
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::serialize;

    fn import(text: &str) -> Score {
        let (score, report) = abc_import(text).unwrap();
        assert!(report.is_empty());
        score
    }

    fn tokens(text: &str) -> String {
        serialize(&import(text)).trim_end().to_string()
    }

    #[test]
    fn unit_length_sets_the_base_duration() {
        assert_eq!(tokens("L:1/8\nK:C\nC"), "C408");
        assert_eq!(tokens("L:1/8\nK:C\nC2"), "C404");
        assert_eq!(tokens("L:1/8\nK:C\nC/2"), "C416");
        assert_eq!(tokens("L:1/4\nK:C\nC"), "C404");
    }

    #[test]
    fn unit_length_defaults_to_an_eighth() {
        assert_eq!(tokens("K:C\nC"), "C408");
    }

    #[test]
    fn rests_take_the_same_length_suffixes() {
        assert_eq!(tokens("L:1/8\nK:C\nz2"), "0004");
        assert_eq!(tokens("L:1/8\nK:C\nz"), "0008");
    }

    #[test]
    fn case_and_marks_select_the_octave() {
        assert_eq!(tokens("K:C\nC c C, c' C,,"), "C408 C508 C308 C608 C208");
    }

    #[test]
    fn accidentals_map_to_raised_classes() {
        assert_eq!(tokens("K:C\n^C"), "c408");
        assert_eq!(tokens("K:C\n_D"), "c408");
        assert_eq!(tokens("K:C\n=C"), "C408");
        assert_eq!(tokens("K:C\n^F2"), "f404");
    }

    #[test]
    fn accidentals_cross_octaves_enharmonically() {
        assert_eq!(tokens("K:C\n^E"), "F408");
        assert_eq!(tokens("K:C\n^B"), "C508");
        assert_eq!(tokens("K:C\n_C"), "B308");
        assert_eq!(tokens("K:C\n_F"), "E408");
    }

    #[test]
    fn bare_slash_halves_and_fractions_combine() {
        assert_eq!(tokens("L:1/8\nK:C\nC/"), "C416");
        assert_eq!(tokens("L:1/8\nK:C\nC3/2"), "C48.");
        assert_eq!(tokens("L:1/8\nK:C\nC3"), "C44.");
        assert_eq!(tokens("L:1/8\nK:C\nC4"), "C402");
    }

    #[test]
    fn bar_lines_and_comments_are_ignored() {
        assert_eq!(tokens("K:C\nC | D || E % trailing words\nF"), "C408 D408 E408 F408");
        assert_eq!(tokens("X:1\nT:Title\n% a comment\nK:C\nC"), "C408");
    }

    #[test]
    fn unsupported_durations_error_instead_of_quantizing() {
        let err = abc_import("L:1/8\nK:C\nC5").unwrap_err();
        assert!(matches!(err, AbcImportError::UnrepresentableDuration(_)));
        let err = abc_import("L:1/7\nK:C\nC").unwrap_err();
        assert!(matches!(err, AbcImportError::UnrepresentableDuration(_)));
    }

    #[test]
    fn keys_other_than_c_are_rejected() {
        assert_eq!(
            abc_import("K:G\nC").unwrap_err(),
            AbcImportError::UnsupportedKey("G".into())
        );
        assert_eq!(abc_import("X:1\n").unwrap_err(), AbcImportError::MissingKey);
    }

    #[test]
    fn repeats_chords_and_ties_are_rejected() {
        for body in [":|", "|:", "[CEG]", "C-C", "(3CDE", "C\"Am\"", "{D}C"] {
            let text = format!("K:C\n{body}");
            let err = abc_import(&text).unwrap_err();
            assert!(
                matches!(err, AbcImportError::UnsupportedConstruct { .. }),
                "{body}: {err:?}"
            );
        }
    }

    #[test]
    fn pitches_outside_the_octave_range_are_rejected() {
        assert_eq!(tokens("K:C\nC,,,,"), "C008");
        let err = abc_import("K:C\nC,,,,,").unwrap_err();
        assert!(matches!(err, AbcImportError::UnrepresentablePitch(_)));
        assert_eq!(tokens("K:C\nb''''"), "B908");
        let err = abc_import("K:C\n^b''''").unwrap_err();
        assert!(matches!(err, AbcImportError::UnrepresentablePitch(_)));
    }

    #[test]
    fn junk_header_lines_are_rejected() {
        let err = abc_import("how now\nK:C\nC").unwrap_err();
        assert!(matches!(err, AbcImportError::UnsupportedConstruct { .. }));
    }

    #[test]
    fn body_may_span_lines_and_end_without_newline() {
        assert_eq!(tokens("K:C\nCDE\nFGA\nB"), "C408 D408 E408 F408 G408 A408 B408");
        assert_eq!(tokens("K:C"), "");
    }
}
