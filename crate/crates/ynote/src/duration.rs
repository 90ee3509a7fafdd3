//! Note durations: seven base values times four modifiers, with exact
//! tick arithmetic.
//!
//! A quarter note is 480 ticks and a whole note 1920. The internal unit
//! is the half-tick (1/960 of a quarter) so that every legal duration,
//! including the double-dotted sixty-fourth at 52.5 ticks, has an exact
//! integer length.

/// Ticks per quarter note.
pub const TICKS_PER_QUARTER: u32 = 480;
/// Half-ticks per quarter note; one half-tick is the exact internal unit.
pub const HALF_TICKS_PER_QUARTER: u32 = 960;

/// The seven base note values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DurationBase {
    Whole,
    Half,
    Quarter,
    Eighth,
    Sixteenth,
    ThirtySecond,
    SixtyFourth,
}

/// All base values, longest first.
pub const DURATION_BASES: [DurationBase; 7] = [
    DurationBase::Whole,
    DurationBase::Half,
    DurationBase::Quarter,
    DurationBase::Eighth,
    DurationBase::Sixteenth,
    DurationBase::ThirtySecond,
    DurationBase::SixtyFourth,
];

impl DurationBase {
    /// Length of the unmodified base value in half-ticks.
    pub const fn half_ticks(self) -> u32 {
        match self {
            DurationBase::Whole => 3840,
            DurationBase::Half => 1920,
            DurationBase::Quarter => 960,
            DurationBase::Eighth => 480,
            DurationBase::Sixteenth => 240,
            DurationBase::ThirtySecond => 120,
            DurationBase::SixtyFourth => 60,
        }
    }

    /// First character of the modified two-character codes: the digit of
    /// the plain code for whole..eighth, and S/T/U for the three values
    /// whose plain codes are two digits wide.
    pub const fn code_char(self) -> char {
        match self {
            DurationBase::Whole => '1',
            DurationBase::Half => '2',
            DurationBase::Quarter => '4',
            DurationBase::Eighth => '8',
            DurationBase::Sixteenth => 'S',
            DurationBase::ThirtySecond => 'T',
            DurationBase::SixtyFourth => 'U',
        }
    }

    const fn from_code_char(c: char) -> Option<Self> {
        match c {
            '1' => Some(DurationBase::Whole),
            '2' => Some(DurationBase::Half),
            '4' => Some(DurationBase::Quarter),
            '8' => Some(DurationBase::Eighth),
            'S' => Some(DurationBase::Sixteenth),
            'T' => Some(DurationBase::ThirtySecond),
            'U' => Some(DurationBase::SixtyFourth),
            _ => None,
        }
    }

    /// The two-digit plain code.
    pub const fn plain_code(self) -> [char; 2] {
        match self {
            DurationBase::Whole => ['0', '1'],
            DurationBase::Half => ['0', '2'],
            DurationBase::Quarter => ['0', '4'],
            DurationBase::Eighth => ['0', '8'],
            DurationBase::Sixteenth => ['1', '6'],
            DurationBase::ThirtySecond => ['3', '2'],
            DurationBase::SixtyFourth => ['6', '4'],
        }
    }
}

/// Length scaling applied to a base value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DurationModifier {
    Plain,
    Dotted,
    DoubleDotted,
    Triplet,
}

/// All modifiers.
pub const DURATION_MODIFIERS: [DurationModifier; 4] = [
    DurationModifier::Plain,
    DurationModifier::Dotted,
    DurationModifier::DoubleDotted,
    DurationModifier::Triplet,
];

impl DurationModifier {
    /// Scaling factor as an exact (numerator, denominator) pair.
    pub const fn factor(self) -> (u32, u32) {
        match self {
            DurationModifier::Plain => (1, 1),
            DurationModifier::Dotted => (3, 2),
            DurationModifier::DoubleDotted => (7, 4),
            DurationModifier::Triplet => (2, 3),
        }
    }

    /// Second character of the modified codes.
    const fn code_char(self) -> Option<char> {
        match self {
            DurationModifier::Plain => None,
            DurationModifier::Dotted => Some('.'),
            DurationModifier::DoubleDotted => Some(':'),
            DurationModifier::Triplet => Some('3'),
        }
    }

    const fn from_code_char(c: char) -> Option<Self> {
        match c {
            '.' => Some(DurationModifier::Dotted),
            ':' => Some(DurationModifier::DoubleDotted),
            '3' => Some(DurationModifier::Triplet),
            _ => None,
        }
    }
}

/// A note duration: base value plus modifier. All 28 combinations are
/// legal and have distinct lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Duration {
    pub base: DurationBase,
    pub modifier: DurationModifier,
}

impl Duration {
    pub const fn new(base: DurationBase, modifier: DurationModifier) -> Self {
        Duration { base, modifier }
    }

    pub const fn plain(base: DurationBase) -> Self {
        Duration::new(base, DurationModifier::Plain)
    }

    /// Exact length in half-ticks. Integral for every legal duration.
    pub const fn half_ticks(self) -> u32 {
        let (num, den) = self.modifier.factor();
        self.base.half_ticks() * num / den
    }

    /// Length in ticks as a reduced exact rational.
    pub const fn ticks_rational(self) -> (u32, u32) {
        let ht = self.half_ticks();
        if ht % 2 == 0 {
            (ht / 2, 1)
        } else {
            (ht, 2)
        }
    }

    /// Length in ticks. Exact: every value is an integer or ends in .5,
    /// both represented without rounding in an f64.
    pub fn ticks(self) -> f64 {
        f64::from(self.half_ticks()) / 2.0
    }

    /// The two-character duration code.
    pub fn code(self) -> [char; 2] {
        match self.modifier.code_char() {
            None => self.base.plain_code(),
            Some(modifier) => [self.base.code_char(), modifier],
        }
    }

    /// Decode a two-character duration code; `None` if it is not one of
    /// the 28 legal codes.
    pub fn from_code(code: [char; 2]) -> Option<Self> {
        for base in DURATION_BASES {
            if base.plain_code() == code {
                return Some(Duration::plain(base));
            }
        }
        let base = DurationBase::from_code_char(code[0])?;
        let modifier = DurationModifier::from_code_char(code[1])?;
        Some(Duration::new(base, modifier))
    }

    /// The legal duration lasting exactly `half_ticks`, if one exists.
    /// The 28 values are distinct, so the match is unique.
    pub fn from_half_ticks(half_ticks: u32) -> Option<Self> {
        Self::all().into_iter().find(|d| d.half_ticks() == half_ticks)
    }

    /// All 28 legal durations, grouped by base, longest base first.
    pub fn all() -> [Duration; 28] {
        let mut all = [Duration::plain(DurationBase::Whole); 28];
        let mut i = 0;
        for base in DURATION_BASES {
            for modifier in DURATION_MODIFIERS {
                all[i] = Duration::new(base, modifier);
                i += 1;
            }
        }
        all
    }
}
