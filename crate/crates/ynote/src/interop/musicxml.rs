//! MusicXML import for partwise scores: the first part's measures are
//! read in order, note durations are converted from divisions and must
//! match a legal duration exactly, and flats resolve to the enharmonic
//! raised class below. Structural features a single melodic line
//! cannot carry (chords, ties, grace notes) are errors rather than
//! silent damage.

use thiserror::Error;

use crate::duration::{Duration, HALF_TICKS_PER_QUARTER};
use crate::pitch::{Pitch, PitchClass};
use crate::score::{Note, Score};

use super::{LossReport, SourceFormat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmlImportError {
    #[error("malformed MusicXML: {0}")]
    Malformed(String),
    #[error("root element {0:?} is not supported; only score-partwise is")]
    UnsupportedRoot(String),
    #[error("chords are not supported (measure {0})")]
    ChordUnsupported(String),
    #[error("duration has no exact equivalent: {0}")]
    ExactDurationMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl XmlImportError {
    /// Stable short name for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            XmlImportError::Malformed(_) => "malformed",
            XmlImportError::UnsupportedRoot(_) => "unsupported-root",
            XmlImportError::ChordUnsupported(_) => "unsupported-chord",
            XmlImportError::ExactDurationMismatch(_) => "duration-mismatch",
            XmlImportError::Unsupported(_) => "unsupported-construct",
        }
    }
}

/// Parse a partwise MusicXML document into a score.
///
/// Only the first `<part>` is read; additional parts are recorded as
/// dropped. Per note, `<duration>` in divisions is converted to
/// half-ticks and must land exactly on one of the 28 legal durations.
/// `<alter>` may be -1, 0, or 1. `<backup>`, `<direction>`, `<sound>`,
/// and other annotations are skipped.
pub fn musicxml_import(text: &str) -> Result<(Score, LossReport), XmlImportError> {
    let document = roxmltree::Document::parse(text)
        .map_err(|e| XmlImportError::Malformed(e.to_string()))?;
    let root = document.root_element();
    if root.tag_name().name() != "score-partwise" {
        return Err(XmlImportError::UnsupportedRoot(root.tag_name().name().to_string()));
    }

    let mut parts = root.children().filter(|n| n.has_tag_name("part"));
    let part = parts
        .next()
        .ok_or_else(|| XmlImportError::Malformed("no part element".into()))?;

    let mut report = LossReport::new(SourceFormat::MusicXml);
    for extra in parts {
        let id = extra.attribute("id").unwrap_or("?");
        report.dropped_events.push(format!("part {id} ignored"));
    }

    let mut notes = Vec::new();
    let mut divisions: Option<u64> = None;
    for measure in part.children().filter(|n| n.has_tag_name("measure")) {
        let measure_number = measure.attribute("number").unwrap_or("?").to_string();
        for element in measure.children().filter(|n| n.is_element()) {
            match element.tag_name().name() {
                "attributes" => {
                    if let Some(d) = child_text(element, "divisions") {
                        let d: u64 = d.parse().ok().filter(|&d| d > 0).ok_or_else(|| {
                            XmlImportError::Malformed(format!("bad divisions value {d:?}"))
                        })?;
                        divisions = Some(d);
                    }
                }
                "note" => {
                    notes.push(read_note(element, divisions, &measure_number)?);
                }
                "forward" => {
                    return Err(XmlImportError::Unsupported(format!(
                        "forward element in measure {measure_number}"
                    )));
                }
                _ => {}
            }
        }
    }
    Ok((Score::new(notes), report))
}

fn read_note(
    node: roxmltree::Node,
    divisions: Option<u64>,
    measure: &str,
) -> Result<Note, XmlImportError> {
    for unsupported in ["chord", "grace", "tie", "cue", "unpitched"] {
        if node.children().any(|n| n.has_tag_name(unsupported)) {
            if unsupported == "chord" {
                return Err(XmlImportError::ChordUnsupported(measure.to_string()));
            }
            return Err(XmlImportError::Unsupported(format!(
                "{unsupported} element in measure {measure}"
            )));
        }
    }
    let dots = node.children().filter(|n| n.has_tag_name("dot")).count();
    if dots > 2 {
        return Err(XmlImportError::Unsupported(format!(
            "{dots} dots in measure {measure}"
        )));
    }

    let divisions = divisions.ok_or_else(|| {
        XmlImportError::Malformed(format!("note in measure {measure} before any divisions"))
    })?;
    let duration: u64 = child_text(node, "duration")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| {
            XmlImportError::Malformed(format!("note in measure {measure} has no duration"))
        })?;
    let numerator = u128::from(duration) * u128::from(HALF_TICKS_PER_QUARTER);
    let denominator = u128::from(divisions);
    let exact = (numerator % denominator == 0)
        .then(|| numerator / denominator)
        .and_then(|ht| u32::try_from(ht).ok())
        .and_then(Duration::from_half_ticks);
    let duration = exact.ok_or_else(|| {
        XmlImportError::ExactDurationMismatch(format!(
            "{duration} divisions of {divisions} per quarter in measure {measure}"
        ))
    })?;

    let pitch = if node.children().any(|n| n.has_tag_name("rest")) {
        Pitch::Rest
    } else {
        let pitch_node = node
            .children()
            .find(|n| n.has_tag_name("pitch"))
            .ok_or_else(|| {
                XmlImportError::Malformed(format!(
                    "note in measure {measure} has neither pitch nor rest"
                ))
            })?;
        read_pitch(pitch_node, measure)?
    };
    Ok(Note::new(pitch, duration))
}

fn read_pitch(node: roxmltree::Node, measure: &str) -> Result<Pitch, XmlImportError> {
    let step = child_text(node, "step")
        .ok_or_else(|| XmlImportError::Malformed(format!("pitch without step in measure {measure}")))?;
    let semitone = match step {
        "C" => 0,
        "D" => 2,
        "E" => 4,
        "F" => 5,
        "G" => 7,
        "A" => 9,
        "B" => 11,
        other => {
            return Err(XmlImportError::Malformed(format!(
                "bad step {other:?} in measure {measure}"
            )));
        }
    };
    let alter = match child_text(node, "alter") {
        None => 0,
        Some(text) => match text.parse::<i32>() {
            Ok(a @ -1..=1) => a,
            _ => {
                return Err(XmlImportError::Unsupported(format!(
                    "alter {text:?} in measure {measure}"
                )));
            }
        },
    };
    let octave: i32 = child_text(node, "octave")
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| {
            XmlImportError::Malformed(format!("pitch without octave in measure {measure}"))
        })?;

    let index = octave
        .checked_add(1)
        .and_then(|o| o.checked_mul(12))
        .and_then(|b| b.checked_add(semitone + alter))
        .ok_or_else(|| {
            XmlImportError::Malformed(format!("octave {octave} out of range in measure {measure}"))
        })?;
    let class = PitchClass::from_semitone(index.rem_euclid(12) as u8).expect("semitone below 12");
    let octave = index.div_euclid(12) - 1;
    u8::try_from(octave)
        .ok()
        .and_then(|o| Pitch::pitched(class, o))
        .ok_or_else(|| {
            XmlImportError::Unsupported(format!(
                "pitch in octave {octave} in measure {measure}"
            ))
        })
}

fn child_text<'a, 'input>(node: roxmltree::Node<'a, 'input>, name: &str) -> Option<&'a str> {
    node.children()
        .find(|n| n.has_tag_name(name))
        .and_then(|n| n.text())
        .map(str::trim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::serialize;

    fn document(divisions: u64, notes_xml: &str) -> String {
        format!(
            "<score-partwise version=\"3.1\"><part-list><score-part id=\"P1\"/></part-list>\
             <part id=\"P1\"><measure number=\"1\"><attributes><divisions>{divisions}</divisions>\
             </attributes>{notes_xml}</measure></part></score-partwise>"
        )
    }

    fn note_xml(pitch: &str, duration: u64) -> String {
        format!("<note>{pitch}<duration>{duration}</duration></note>")
    }

    fn import(text: &str) -> Score {
        let (score, report) = musicxml_import(text).unwrap();
        assert!(report.is_empty());
        score
    }

    fn tokens(text: &str) -> String {
        serialize(&import(text)).trim_end().to_string()
    }

    #[test]
    fn quarter_note_at_one_division() {
        let xml = document(
            1,
            &note_xml("<pitch><step>C</step><octave>4</octave></pitch>", 1),
        );
        assert_eq!(tokens(&xml), "C404");
    }

    #[test]
    fn whole_rest_at_one_division() {
        let xml = document(1, &note_xml("<rest/>", 4));
        assert_eq!(tokens(&xml), "0001");
    }

    #[test]
    fn flat_resolves_to_the_raised_class_below() {
        let xml = document(
            1,
            &note_xml(
                "<pitch><step>D</step><alter>-1</alter><octave>4</octave></pitch>",
                1,
            ),
        );
        assert_eq!(tokens(&xml), "c404");
    }

    #[test]
    fn sharp_and_flat_cross_octaves() {
        let flat_c = document(
            1,
            &note_xml(
                "<pitch><step>C</step><alter>-1</alter><octave>4</octave></pitch>",
                1,
            ),
        );
        assert_eq!(tokens(&flat_c), "B304");
        let sharp_b = document(
            1,
            &note_xml(
                "<pitch><step>B</step><alter>1</alter><octave>4</octave></pitch>",
                1,
            ),
        );
        assert_eq!(tokens(&sharp_b), "C504");
    }

    #[test]
    fn dotted_duration_matches_exactly() {
        let xml = document(
            2,
            "<note><pitch><step>G</step><octave>4</octave></pitch>\
             <duration>3</duration><dot/></note>",
        );
        assert_eq!(tokens(&xml), "G44.");
    }

    #[test]
    fn triplet_divisions_convert_exactly() {
        // one third of a quarter is a triplet eighth
        let xml = document(3, &note_xml("<pitch><step>E</step><octave>5</octave></pitch>", 1));
        assert_eq!(tokens(&xml), "E583");
    }

    #[test]
    fn inexact_durations_are_errors() {
        let xml = document(480, &note_xml("<pitch><step>C</step><octave>4</octave></pitch>", 700));
        let err = musicxml_import(&xml).unwrap_err();
        assert!(matches!(err, XmlImportError::ExactDurationMismatch(_)));

        let xml = document(7, &note_xml("<rest/>", 1));
        let err = musicxml_import(&xml).unwrap_err();
        assert!(matches!(err, XmlImportError::ExactDurationMismatch(_)));
    }

    #[test]
    fn divisions_persist_across_measures() {
        let xml = "<score-partwise><part id=\"P1\">\
            <measure number=\"1\"><attributes><divisions>1</divisions></attributes>\
            <note><pitch><step>C</step><octave>4</octave></pitch><duration>1</duration></note></measure>\
            <measure number=\"2\">\
            <note><pitch><step>D</step><octave>4</octave></pitch><duration>2</duration></note></measure>\
            </part></score-partwise>";
        assert_eq!(tokens(xml), "C404 D402");
    }

    #[test]
    fn timewise_root_is_rejected() {
        let err = musicxml_import("<score-timewise><measure number=\"1\"/></score-timewise>")
            .unwrap_err();
        assert_eq!(err, XmlImportError::UnsupportedRoot("score-timewise".into()));
    }

    #[test]
    fn chords_are_rejected() {
        let xml = document(
            1,
            "<note><pitch><step>C</step><octave>4</octave></pitch><duration>1</duration></note>\
             <note><chord/><pitch><step>E</step><octave>4</octave></pitch><duration>1</duration></note>",
        );
        let err = musicxml_import(&xml).unwrap_err();
        assert_eq!(err, XmlImportError::ChordUnsupported("1".into()));
    }

    #[test]
    fn grace_notes_and_ties_are_rejected() {
        let grace = document(1, "<note><grace/><pitch><step>C</step><octave>4</octave></pitch></note>");
        assert!(matches!(musicxml_import(&grace).unwrap_err(), XmlImportError::Unsupported(_)));

        let tie = document(
            1,
            "<note><pitch><step>C</step><octave>4</octave></pitch>\
             <duration>1</duration><tie type=\"start\"/></note>",
        );
        assert!(matches!(musicxml_import(&tie).unwrap_err(), XmlImportError::Unsupported(_)));
    }

    #[test]
    fn backup_direction_and_sound_are_skipped() {
        let xml = document(
            1,
            "<direction><sound tempo=\"90\"/></direction>\
             <note><pitch><step>C</step><octave>4</octave></pitch><duration>1</duration></note>\
             <backup><duration>1</duration></backup>",
        );
        assert_eq!(tokens(&xml), "C404");
    }

    #[test]
    fn forward_is_rejected() {
        let xml = document(1, "<forward><duration>1</duration></forward>");
        assert!(matches!(musicxml_import(&xml).unwrap_err(), XmlImportError::Unsupported(_)));
    }

    #[test]
    fn extra_parts_are_reported_as_dropped() {
        let xml = "<score-partwise>\
            <part id=\"P1\"><measure number=\"1\"><attributes><divisions>1</divisions></attributes>\
            <note><pitch><step>C</step><octave>4</octave></pitch><duration>1</duration></note></measure></part>\
            <part id=\"P2\"><measure number=\"1\"/></part>\
            </score-partwise>";
        let (score, report) = musicxml_import(xml).unwrap();
        assert_eq!(serialize(&score).trim_end(), "C404");
        assert_eq!(report.dropped_events, vec!["part P2 ignored".to_string()]);
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(matches!(
            musicxml_import("<score-partwise><part"),
            Err(XmlImportError::Malformed(_))
        ));
        let no_divisions = "<score-partwise><part id=\"P1\"><measure number=\"1\">\
            <note><rest/><duration>1</duration></note></measure></part></score-partwise>";
        assert!(matches!(
            musicxml_import(no_divisions),
            Err(XmlImportError::Malformed(_))
        ));
    }
}
