//! A toolkit for a fixed-width four-character music notation in which
//! every note spells a pitch in two characters and a duration in two
//! more. The crate parses and writes the notation, repairs almost-valid
//! streams, exchanges scores with MIDI, ABC, and MusicXML subsets,
//! renders audio, extracts continuation prompts, scores generated
//! sequences against references, and ships a small order-k Markov
//! generator so the whole generate, repair, evaluate loop runs locally.

pub mod audio;
pub mod duration;
pub mod interop;
pub mod markov;
pub mod metrics;
pub mod normalize;
pub mod pitch;
pub mod prompt;
pub mod report;
pub mod score;
pub mod text;
