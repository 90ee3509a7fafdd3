//! Notes and scores: the note is a pitch/duration pair, the score an
//! ordered note sequence with performance metadata.

use crate::duration::Duration;
use crate::pitch::Pitch;

/// Bar length in ticks: the meter is fixed at 4/4, four 480-tick quarters.
pub const BAR_TICKS: u32 = 1920;
/// Bar length in half-ticks.
pub const BAR_HALF_TICKS: u64 = 3840;

/// Default tempo for playback and export; the notation itself carries no
/// tempo, so scores parsed from text start here.
pub const DEFAULT_TEMPO_BPM: f64 = 120.0;

/// A single note: the atomic four-character unit of the notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Note {
    pub pitch: Pitch,
    pub duration: Duration,
}

impl Note {
    pub const fn new(pitch: Pitch, duration: Duration) -> Self {
        Note { pitch, duration }
    }

    pub const fn rest(duration: Duration) -> Self {
        Note { pitch: Pitch::Rest, duration }
    }
}

/// An ordered note sequence in 4/4, with a tempo used only by audio and
/// MIDI export.
#[derive(Debug, Clone, PartialEq)]
pub struct Score {
    pub notes: Vec<Note>,
    /// Beats per minute; must be positive.
    pub tempo_bpm: f64,
}

impl Score {
    pub fn new(notes: Vec<Note>) -> Self {
        Score { notes, tempo_bpm: DEFAULT_TEMPO_BPM }
    }

    pub fn with_tempo(notes: Vec<Note>, tempo_bpm: f64) -> Self {
        assert!(tempo_bpm > 0.0, "tempo must be positive");
        Score { notes, tempo_bpm }
    }

    /// Total length in half-ticks: the exact sum of the note lengths.
    pub fn total_half_ticks(&self) -> u64 {
        self.notes.iter().map(|n| u64::from(n.duration.half_ticks())).sum()
    }

    /// Total length in ticks. Exact: always an integer or half-integer.
    pub fn total_ticks(&self) -> f64 {
        self.total_half_ticks() as f64 / 2.0
    }

    pub fn is_empty(&self) -> bool {
        self.notes.is_empty()
    }
}

impl Default for Score {
    fn default() -> Self {
        Score::new(Vec::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duration::{DurationBase, DurationModifier};
    use crate::pitch::PitchClass;

    fn quarter_c4() -> Note {
        Note::new(
            Pitch::pitched(PitchClass::C, 4).unwrap(),
            Duration::plain(DurationBase::Quarter),
        )
    }

    #[test]
    fn empty_score_has_zero_ticks() {
        assert_eq!(Score::default().total_ticks(), 0.0);
        assert_eq!(Score::default().total_half_ticks(), 0);
    }

    #[test]
    fn totals_are_exact_sums() {
        let half = Note::rest(Duration::plain(DurationBase::Half));
        let s = Score::new(vec![quarter_c4(), quarter_c4(), half]);
        assert_eq!(s.total_ticks(), 1920.0);
        assert_eq!(s.total_half_ticks(), BAR_HALF_TICKS);
    }

    #[test]
    fn three_quarter_triplets_make_a_half_bar() {
        let t = Note::rest(Duration::new(DurationBase::Quarter, DurationModifier::Triplet));
        let s = Score::new(vec![t, t, t]);
        assert_eq!(s.total_ticks(), 960.0);
    }

    #[test]
    fn default_tempo_is_120() {
        assert_eq!(Score::new(vec![]).tempo_bpm, 120.0);
    }

    #[test]
    #[should_panic(expected = "tempo must be positive")]
    fn zero_tempo_rejected() {
        let _ = Score::with_tempo(vec![], 0.0);
    }
}
