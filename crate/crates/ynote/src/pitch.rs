//! Pitch classes, octaves, and the rest marker, with equal-temperament
//! frequency and MIDI number conversions anchored at A4 = 440 Hz.

use thiserror::Error;

/// The twelve semitone classes of an octave.
///
/// Naturals serialize as uppercase letters; the five raised classes
/// serialize as the lowercase letter of the natural below them
/// (C sharp is `c`, and so on). There is no `e` or `b`: E sharp and
/// B sharp are enharmonic naturals and have no letter of their own.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PitchClass {
    C,
    CSharp,
    D,
    DSharp,
    E,
    F,
    FSharp,
    G,
    GSharp,
    A,
    ASharp,
    B,
}

/// All twelve classes in semitone order.
pub const PITCH_CLASSES: [PitchClass; 12] = [
    PitchClass::C,
    PitchClass::CSharp,
    PitchClass::D,
    PitchClass::DSharp,
    PitchClass::E,
    PitchClass::F,
    PitchClass::FSharp,
    PitchClass::G,
    PitchClass::GSharp,
    PitchClass::A,
    PitchClass::ASharp,
    PitchClass::B,
];

impl PitchClass {
    /// Semitones above C, 0..=11.
    pub const fn semitone(self) -> u8 {
        match self {
            PitchClass::C => 0,
            PitchClass::CSharp => 1,
            PitchClass::D => 2,
            PitchClass::DSharp => 3,
            PitchClass::E => 4,
            PitchClass::F => 5,
            PitchClass::FSharp => 6,
            PitchClass::G => 7,
            PitchClass::GSharp => 8,
            PitchClass::A => 9,
            PitchClass::ASharp => 10,
            PitchClass::B => 11,
        }
    }

    /// Inverse of [`semitone`](Self::semitone); `None` above 11.
    pub const fn from_semitone(semitone: u8) -> Option<Self> {
        if semitone < 12 {
            Some(PITCH_CLASSES[semitone as usize])
        } else {
            None
        }
    }

    /// True for the five raised (lowercase-letter) classes.
    pub const fn is_raised(self) -> bool {
        matches!(
            self,
            PitchClass::CSharp
                | PitchClass::DSharp
                | PitchClass::FSharp
                | PitchClass::GSharp
                | PitchClass::ASharp
        )
    }

    /// The single letter this class serializes as.
    pub const fn letter(self) -> char {
        match self {
            PitchClass::C => 'C',
            PitchClass::CSharp => 'c',
            PitchClass::D => 'D',
            PitchClass::DSharp => 'd',
            PitchClass::E => 'E',
            PitchClass::F => 'F',
            PitchClass::FSharp => 'f',
            PitchClass::G => 'G',
            PitchClass::GSharp => 'g',
            PitchClass::A => 'A',
            PitchClass::ASharp => 'a',
            PitchClass::B => 'B',
        }
    }

    /// Parse a pitch letter. Lowercase `e` and `b` are not valid letters.
    pub const fn from_letter(letter: char) -> Option<Self> {
        match letter {
            'C' => Some(PitchClass::C),
            'c' => Some(PitchClass::CSharp),
            'D' => Some(PitchClass::D),
            'd' => Some(PitchClass::DSharp),
            'E' => Some(PitchClass::E),
            'F' => Some(PitchClass::F),
            'f' => Some(PitchClass::FSharp),
            'G' => Some(PitchClass::G),
            'g' => Some(PitchClass::GSharp),
            'A' => Some(PitchClass::A),
            'a' => Some(PitchClass::ASharp),
            'B' => Some(PitchClass::B),
            _ => None,
        }
    }
}

/// A pitch field value: a sounding pitch (class + single-digit octave)
/// or the rest marker, which serializes as `00`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pitch {
    Pitched { class: PitchClass, octave: u8 },
    Rest,
}

/// Errors from pitch conversions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PitchError {
    #[error("a rest has no frequency")]
    RestHasNoFrequency,
    #[error("a rest has no MIDI number")]
    RestHasNoMidiNumber,
    #[error("{0} is outside the MIDI range 0..=127")]
    OutOfMidiRange(String),
}

impl Pitch {
    /// A sounding pitch; octave must fit the single-digit grammar (0..=9).
    pub fn pitched(class: PitchClass, octave: u8) -> Option<Self> {
        if octave <= 9 {
            Some(Pitch::Pitched { class, octave })
        } else {
            None
        }
    }

    pub const fn is_rest(self) -> bool {
        matches!(self, Pitch::Rest)
    }

    /// MIDI number per the C4 = 60 convention: `12 * (octave + 1) + semitone`.
    ///
    /// Classes above G9 fall outside 0..=127 and are rejected.
    pub fn midi_number(self) -> Result<u8, PitchError> {
        match self {
            Pitch::Rest => Err(PitchError::RestHasNoMidiNumber),
            Pitch::Pitched { .. } => {
                let m = self.midi_index().expect("pitched");
                if (0..=127).contains(&m) {
                    Ok(m as u8)
                } else {
                    Err(PitchError::OutOfMidiRange(self.describe()))
                }
            }
        }
    }

    /// Frequency in Hz under equal temperament with A4 = 440 Hz.
    ///
    /// Defined for every pitched value, including the few classes above
    /// G9 that have no MIDI number.
    pub fn frequency(self) -> Result<f64, PitchError> {
        match self.midi_index() {
            None => Err(PitchError::RestHasNoFrequency),
            Some(m) => Ok(440.0 * 2f64.powf((f64::from(m) - 69.0) / 12.0)),
        }
    }

    /// Shift by whole octaves; `None` if the result leaves the 0..=9 range.
    pub fn transpose_octave(self, delta: i32) -> Option<Self> {
        match self {
            Pitch::Rest => Some(Pitch::Rest),
            Pitch::Pitched { class, octave } => {
                let octave = i32::from(octave) + delta;
                u8::try_from(octave).ok().and_then(|o| Pitch::pitched(class, o))
            }
        }
    }

    /// The extended MIDI index (may exceed 127 for octave-9 classes above G9).
    fn midi_index(self) -> Option<i32> {
        match self {
            Pitch::Rest => None,
            Pitch::Pitched { class, octave } => {
                Some(12 * (i32::from(octave) + 1) + i32::from(class.semitone()))
            }
        }
    }

    fn describe(self) -> String {
        match self {
            Pitch::Rest => "rest".to_string(),
            Pitch::Pitched { class, octave } => format!("{}{}", class.letter(), octave),
        }
    }
}
