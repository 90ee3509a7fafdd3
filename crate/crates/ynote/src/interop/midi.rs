//! Standard MIDI file import and export.
//!
//! Export writes format 0 at 960 PPQN, where one file tick equals one
//! half-tick, so every legal duration lands on an integer delta.
//! Import accepts format 0 and 1, reduces the first sounding track to
//! a single melodic line, and quantizes lengths to the nearest legal
//! duration; everything it drops or bends is recorded in the
//! [`LossReport`].

use thiserror::Error;

use crate::duration::{Duration, DurationBase};
use crate::pitch::{Pitch, PitchClass, PitchError};
use crate::score::{Note, Score, DEFAULT_TEMPO_BPM};

use super::{LossReport, SourceFormat};

/// Export resolution in ticks per quarter note.
pub const EXPORT_PPQN: u16 = 960;

const NOTE_ON_VELOCITY: u8 = 64;

/// Half a 64th note in half-ticks: gaps shorter than this are absorbed
/// into the preceding note instead of becoming rests.
const ABSORB_LIMIT: u64 = 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImportError {
    #[error("malformed MIDI file: {0}")]
    Malformed(String),
    #[error("the file contains no note events")]
    NoNoteEvents,
}

impl ImportError {
    /// Stable short name for diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            ImportError::Malformed(_) => "malformed",
            ImportError::NoNoteEvents => "no-note-events",
        }
    }
}

/// Serialize a score as a format-0 standard MIDI file.
///
/// The single track opens with a tempo event from `score.tempo_bpm`,
/// pitched notes become velocity-64 note-on/note-off pairs, and rests
/// only advance time. Pitches above G9 have no MIDI number and fail.
pub fn midi_export(score: &Score) -> Result<Vec<u8>, PitchError> {
    let mut track = Vec::new();
    let tempo = (60_000_000.0 / score.tempo_bpm).round() as u32;
    write_vlq(&mut track, 0);
    track.extend_from_slice(&[0xFF, 0x51, 0x03]);
    track.extend_from_slice(&tempo.to_be_bytes()[1..]);

    let mut pending: u64 = 0;
    for note in &score.notes {
        let half_ticks = u64::from(note.duration.half_ticks());
        if note.pitch.is_rest() {
            pending += half_ticks;
            continue;
        }
        let number = note.pitch.midi_number()?;
        write_delta(&mut track, pending);
        track.extend_from_slice(&[0x90, number, NOTE_ON_VELOCITY]);
        write_delta(&mut track, half_ticks);
        track.extend_from_slice(&[0x80, number, 0]);
        pending = 0;
    }
    write_delta(&mut track, pending);
    track.extend_from_slice(&[0xFF, 0x2F, 0x00]);

    let mut out = Vec::with_capacity(track.len() + 22);
    out.extend_from_slice(b"MThd");
    out.extend_from_slice(&6u32.to_be_bytes());
    out.extend_from_slice(&0u16.to_be_bytes());
    out.extend_from_slice(&1u16.to_be_bytes());
    out.extend_from_slice(&EXPORT_PPQN.to_be_bytes());
    out.extend_from_slice(b"MTrk");
    out.extend_from_slice(&(track.len() as u32).to_be_bytes());
    out.extend_from_slice(&track);
    Ok(out)
}

/// Read a format 0 or 1 standard MIDI file back into a score.
///
/// Notes come from the first track that plays any; the tempo comes
/// from the first tempo event in track order, defaulting to 120 BPM.
/// Lengths are quantized per [`nearest_duration`], overlapping notes
/// keep the earlier one, and gaps become rests.
pub fn midi_import(bytes: &[u8]) -> Result<(Score, LossReport), ImportError> {
    let mut reader = Reader { bytes, pos: 0 };
    if reader.take(4)? != b"MThd" {
        return Err(ImportError::Malformed("missing MThd header".into()));
    }
    let header_len = reader.u32()?;
    if header_len < 6 {
        return Err(ImportError::Malformed("header too short".into()));
    }
    let format = reader.u16()?;
    if format > 1 {
        return Err(ImportError::Malformed(format!("format {format} is not supported")));
    }
    let track_count = reader.u16()?;
    let division = reader.u16()?;
    if division & 0x8000 != 0 {
        return Err(ImportError::Malformed("SMPTE time division is not supported".into()));
    }
    if division == 0 {
        return Err(ImportError::Malformed("zero time division".into()));
    }
    reader.take(header_len as usize - 6)?;

    let mut tracks = Vec::new();
    for _ in 0..track_count {
        if reader.take(4)? != b"MTrk" {
            return Err(ImportError::Malformed("missing MTrk chunk".into()));
        }
        let len = reader.u32()? as usize;
        let data = reader.take(len)?;
        tracks.push(scan_track(data)?);
    }

    let tempo_bpm = tracks
        .iter()
        .find_map(|t| t.first_tempo)
        .map_or(DEFAULT_TEMPO_BPM, |microseconds| 60_000_000.0 / f64::from(microseconds));

    let first = tracks
        .iter()
        .position(|t| t.saw_note_on)
        .ok_or(ImportError::NoNoteEvents)?;

    let mut report = LossReport::new(SourceFormat::Midi);
    report.dropped_events = tracks[first].dropped.clone();
    for (i, track) in tracks.iter().enumerate().skip(first + 1) {
        if track.saw_note_on {
            report.dropped_events.push(format!("track {i} plays notes but was ignored"));
        }
    }
    let notes = assemble(&tracks[first], u64::from(division), &mut report);
    Ok((Score::with_tempo(notes, tempo_bpm), report))
}

/// The nearest legal duration to `num / den` half-ticks, by half-tick
/// distance with ties going to the shorter duration. The flag is true
/// when the match is exact.
pub fn nearest_duration(num: u64, den: u64) -> (Duration, bool) {
    assert!(den > 0);
    let mut all = Duration::all();
    all.sort_by_key(|d| d.half_ticks());
    let mut best = all[0];
    let mut best_distance = num.abs_diff(u64::from(all[0].half_ticks()) * den);
    for candidate in &all[1..] {
        let distance = num.abs_diff(u64::from(candidate.half_ticks()) * den);
        if distance < best_distance {
            best = *candidate;
            best_distance = distance;
        }
    }
    (best, best_distance == 0)
}

/// A note event pair in file ticks: MIDI number, onset, release.
struct RawNote {
    number: u8,
    start: u64,
    end: u64,
}

struct TrackScan {
    notes: Vec<RawNote>,
    first_tempo: Option<u32>,
    end_time: u64,
    saw_note_on: bool,
    dropped: Vec<String>,
}

fn scan_track(data: &[u8]) -> Result<TrackScan, ImportError> {
    let mut reader = Reader { bytes: data, pos: 0 };
    let mut scan = TrackScan {
        notes: Vec::new(),
        first_tempo: None,
        end_time: 0,
        saw_note_on: false,
        dropped: Vec::new(),
    };
    let mut running: Option<u8> = None;
    let mut time: u64 = 0;
    let mut current: Option<(u8, u64)> = None;

    while !reader.at_end() {
        time += u64::from(reader.vlq()?);
        let mut status = reader.peek()?;
        if status < 0x80 {
            status = running
                .ok_or_else(|| ImportError::Malformed("data byte without running status".into()))?;
        } else {
            reader.take(1)?;
        }
        match status {
            0xFF => {
                let kind = reader.u8()?;
                let len = reader.vlq()? as usize;
                let payload = reader.take(len)?;
                match kind {
                    0x51 if len == 3 => {
                        let tempo =
                            u32::from_be_bytes([0, payload[0], payload[1], payload[2]]);
                        if scan.first_tempo.is_none() && tempo > 0 {
                            scan.first_tempo = Some(tempo);
                        }
                    }
                    0x2F => break,
                    _ => {}
                }
            }
            0xF0 | 0xF7 => {
                let len = reader.vlq()? as usize;
                reader.take(len)?;
                running = None;
            }
            0xF1..=0xFE => {
                return Err(ImportError::Malformed(format!(
                    "unexpected system message {status:#04x}"
                )));
            }
            _ => {
                running = Some(status);
                let data1 = reader.u8()?;
                let kind = status & 0xF0;
                let data2 = match kind {
                    0xC0 | 0xD0 => 0,
                    _ => reader.u8()?,
                };
                let on = kind == 0x90 && data2 > 0;
                let off = kind == 0x80 || (kind == 0x90 && data2 == 0);
                if on {
                    scan.saw_note_on = true;
                    if current.is_some() {
                        scan.dropped
                            .push(format!("overlapping note {data1} at tick {time}"));
                    } else if data1 < 12 {
                        scan.dropped
                            .push(format!("note {data1} below the notation's octave 0"));
                    } else {
                        current = Some((data1, time));
                    }
                } else if off {
                    if let Some((number, start)) = current {
                        if number == data1 {
                            if time == start {
                                scan.dropped
                                    .push(format!("zero-length note {number} at tick {time}"));
                            } else {
                                scan.notes.push(RawNote { number, start, end: time });
                            }
                            current = None;
                        }
                    }
                }
            }
        }
    }
    if let Some((number, start)) = current {
        scan.dropped
            .push(format!("note {number} at tick {start} never released"));
    }
    scan.end_time = time;
    Ok(scan)
}

/// Turn scanned note pairs into a note list, quantizing lengths and
/// filling gaps with rests. `division` is the file's PPQN.
fn assemble(scan: &TrackScan, division: u64, report: &mut LossReport) -> Vec<Note> {
    let mut notes = Vec::new();
    let mut previous_end: u64 = 0;

    for (i, raw) in scan.notes.iter().enumerate() {
        let gap_ticks = raw.start - previous_end;
        if gap_ticks * 960 >= ABSORB_LIMIT * division {
            push_gap(gap_ticks * 960, division, &mut notes, report);
        } else if gap_ticks > 0 && notes.is_empty() {
            report.quantized_notes += 1;
        }

        let next_start = scan.notes.get(i + 1).map_or(scan.end_time, |n| n.start);
        let mut length_ticks = raw.end - raw.start;
        let tail = next_start.saturating_sub(raw.end);
        if tail * 960 < ABSORB_LIMIT * division {
            length_ticks += tail;
            previous_end = raw.end + tail;
        } else {
            previous_end = raw.end;
        }

        let (duration, exact) = nearest_duration(length_ticks * 960, division);
        if !exact {
            report.quantized_notes += 1;
        }
        let pitch = pitch_from_midi(raw.number);
        notes.push(Note::new(pitch, duration));
    }

    if scan.end_time > previous_end {
        let gap_ticks = scan.end_time - previous_end;
        if gap_ticks * 960 >= ABSORB_LIMIT * division {
            push_gap(gap_ticks * 960, division, &mut notes, report);
        }
    }
    notes
}

fn pitch_from_midi(number: u8) -> Pitch {
    let class = PitchClass::from_semitone(number % 12).expect("semitone below 12");
    Pitch::Pitched { class, octave: number / 12 - 1 }
}

/// Decompose a gap of `num / den` half-ticks into rests. A gap that is
/// exactly one legal duration becomes a single rest; longer gaps peel
/// whole rests then fill greedily; fractional residue rounds away.
fn push_gap(num: u64, den: u64, notes: &mut Vec<Note>, report: &mut LossReport) {
    let (single, exact) = nearest_duration(num, den);
    if exact {
        notes.push(Note::rest(single));
        return;
    }
    let mut exact_so_far = num % den == 0;
    let mut remaining = num / den + u64::from(num % den >= den.div_ceil(2));
    let whole = Duration::plain(DurationBase::Whole);
    let whole_half_ticks = u64::from(whole.half_ticks());
    loop {
        if remaining == 0 {
            break;
        }
        if let Some(d) = exact_duration(remaining) {
            notes.push(Note::rest(d));
            break;
        }
        if remaining > whole_half_ticks {
            notes.push(Note::rest(whole));
            remaining -= whole_half_ticks;
            continue;
        }
        if remaining < ABSORB_LIMIT {
            exact_so_far = false;
            break;
        }
        let (nearest, _) = nearest_duration(remaining, 1);
        if u64::from(nearest.half_ticks()) > remaining {
            notes.push(Note::rest(nearest));
            exact_so_far = false;
            break;
        }
        notes.push(Note::rest(nearest));
        remaining -= u64::from(nearest.half_ticks());
    }
    if !exact_so_far {
        report.quantized_notes += 1;
    }
}

fn exact_duration(half_ticks: u64) -> Option<Duration> {
    u32::try_from(half_ticks).ok().and_then(Duration::from_half_ticks)
}

fn write_delta(out: &mut Vec<u8>, ticks: u64) {
    let ticks = u32::try_from(ticks).expect("delta time fits in an SMF quantity");
    write_vlq(out, ticks);
}

fn write_vlq(out: &mut Vec<u8>, value: u32) {
    assert!(value < 1 << 28, "variable-length quantity out of range");
    let mut buffer = [0u8; 4];
    let mut index = 3;
    buffer[index] = (value & 0x7F) as u8;
    let mut value = value >> 7;
    while value > 0 {
        index -= 1;
        buffer[index] = 0x80 | (value & 0x7F) as u8;
        value >>= 7;
    }
    out.extend_from_slice(&buffer[index..]);
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Result<u8, ImportError> {
        self.bytes
            .get(self.pos)
            .copied()
            .ok_or_else(|| ImportError::Malformed("unexpected end of data".into()))
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], ImportError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| ImportError::Malformed("unexpected end of data".into()))?;
        let slice = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(slice)
    }

    fn u8(&mut self) -> Result<u8, ImportError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, ImportError> {
        Ok(u16::from_be_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, ImportError> {
        Ok(u32::from_be_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn vlq(&mut self) -> Result<u32, ImportError> {
        let mut value: u32 = 0;
        for _ in 0..4 {
            let byte = self.u8()?;
            value = (value << 7) | u32::from(byte & 0x7F);
            if byte & 0x80 == 0 {
                return Ok(value);
            }
        }
        Err(ImportError::Malformed("variable-length quantity too long".into()))
    }
}
