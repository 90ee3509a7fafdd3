//! Seeded random score builder shared by the integration tests.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use ynote::duration::Duration;
use ynote::pitch::{Pitch, PITCH_CLASSES};
use ynote::score::{Note, Score};

/// Tempos whose microseconds-per-quarter value is a whole number, so
/// a tempo survives a MIDI round trip bit for bit.
pub const EXACT_TEMPOS: [f64; 14] =
    [40.0, 48.0, 50.0, 60.0, 75.0, 80.0, 96.0, 100.0, 120.0, 125.0, 150.0, 160.0, 200.0, 240.0];

pub struct ScoreShape {
    /// Bounds on the note count, inclusive.
    pub notes: (usize, usize),
    /// Sprinkle rests in (never adjacent, never first or last). Runs
    /// of rests and edge rests do not survive a MIDI round trip, so
    /// round-trip tests keep this shape.
    pub rests: bool,
    /// Highest octave to draw, inclusive. 9 spans the whole grammar;
    /// 8 stays below the MIDI ceiling for every class.
    pub max_octave: u8,
    /// Pick a tempo from [`EXACT_TEMPOS`] instead of the default.
    pub random_tempo: bool,
}

pub fn random_score(rng: &mut ChaCha8Rng, shape: &ScoreShape) -> Score {
    let count = rng.random_range(shape.notes.0..=shape.notes.1);
    let mut notes = Vec::with_capacity(count);
    let mut previous_was_rest = true;
    for index in 0..count {
        let duration = random_duration(rng);
        let rest_allowed = shape.rests && !previous_was_rest && index + 1 != count;
        if rest_allowed && rng.random_bool(0.12) {
            notes.push(Note::rest(duration));
            previous_was_rest = true;
        } else {
            let class = PITCH_CLASSES[rng.random_range(0..PITCH_CLASSES.len())];
            let octave = rng.random_range(0..=shape.max_octave);
            let pitch = Pitch::pitched(class, octave).expect("octave in range");
            notes.push(Note::new(pitch, duration));
            previous_was_rest = false;
        }
    }
    if shape.random_tempo {
        Score::with_tempo(notes, EXACT_TEMPOS[rng.random_range(0..EXACT_TEMPOS.len())])
    } else {
        Score::new(notes)
    }
}

pub fn random_duration(rng: &mut ChaCha8Rng) -> Duration {
    let all = Duration::all();
    all[rng.random_range(0..all.len())]
}
