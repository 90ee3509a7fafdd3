//! Converters between scores and the three interchange formats: MIDI
//! (import and export), ABC (import), and MusicXML (import). Every
//! importer returns a [`LossReport`] alongside the score; an empty
//! report means the conversion was exact.

use std::fmt;

pub mod abc;
pub mod midi;
pub mod musicxml;

/// Which format an import came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SourceFormat {
    Midi,
    Abc,
    MusicXml,
}

impl fmt::Display for SourceFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SourceFormat::Midi => "MIDI",
            SourceFormat::Abc => "ABC",
            SourceFormat::MusicXml => "MusicXML",
        })
    }
}

/// What an import could not carry over. An empty report guarantees the
/// conversion is exactly invertible where an exporter exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LossReport {
    pub source_format: SourceFormat,
    /// One human-readable reason per dropped event.
    pub dropped_events: Vec<String>,
    /// Notes or rests whose length had no exact representation and was
    /// moved to the nearest legal duration.
    pub quantized_notes: usize,
}

impl LossReport {
    pub fn new(source_format: SourceFormat) -> Self {
        LossReport { source_format, dropped_events: Vec::new(), quantized_notes: 0 }
    }

    pub fn is_empty(&self) -> bool {
        self.dropped_events.is_empty() && self.quantized_notes == 0
    }

    /// One-line account for log output.
    pub fn summary(&self) -> String {
        if self.is_empty() {
            format!("{} import: lossless", self.source_format)
        } else {
            format!(
                "{} import: {} event(s) dropped, {} note(s) quantized",
                self.source_format,
                self.dropped_events.len(),
                self.quantized_notes
            )
        }
    }
}
