//! Waveform rendering: every pitched note becomes a sine segment at
//! its equal-temperament frequency, rests become silence, and the
//! result is packed into a 16-bit mono RIFF/WAVE file. Note boundaries
//! are computed from the exact half-tick timeline and rounded per
//! note, so cumulative drift never reaches a full sample.

use thiserror::Error;

use crate::duration::HALF_TICKS_PER_QUARTER;
use crate::score::Score;

/// Knobs for [`render_wav`].
#[derive(Debug, Clone, PartialEq)]
pub struct RenderConfig {
    /// Output rate in Hz, at least 8000.
    pub sample_rate: u32,
    /// Peak level as a fraction of full scale, 0 to 1.
    pub amplitude: f64,
    /// Linear fade-in/out length per note, clamped to half the note.
    pub fade_ms: f64,
    /// Render at this tempo instead of the score's own.
    pub tempo_override: Option<f64>,
}

impl Default for RenderConfig {
    fn default() -> Self {
        RenderConfig { sample_rate: 44100, amplitude: 0.5, fade_ms: 5.0, tempo_override: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("invalid render config: {0}")]
    InvalidConfig(String),
}

/// Render a score to WAV file bytes (PCM 16-bit mono little-endian).
///
/// A note's length in seconds is `half_ticks * 60 / (tempo * 960)`;
/// the whole file holds `round(total_seconds * sample_rate)` samples.
pub fn render_wav(score: &Score, config: &RenderConfig) -> Result<Vec<u8>, RenderError> {
    if config.sample_rate < 8000 {
        return Err(RenderError::InvalidConfig(format!(
            "sample rate {} is below 8000 Hz",
            config.sample_rate
        )));
    }
    if !(0.0..=1.0).contains(&config.amplitude) {
        return Err(RenderError::InvalidConfig(format!(
            "amplitude {} is outside 0..=1",
            config.amplitude
        )));
    }
    if !config.fade_ms.is_finite() || config.fade_ms < 0.0 {
        return Err(RenderError::InvalidConfig(format!("bad fade length {} ms", config.fade_ms)));
    }
    let tempo = config.tempo_override.unwrap_or(score.tempo_bpm);
    if !tempo.is_finite() || tempo <= 0.0 {
        return Err(RenderError::InvalidConfig(format!("bad tempo {tempo} BPM")));
    }

    let rate = f64::from(config.sample_rate);
    let seconds_per_half_tick = 60.0 / (tempo * f64::from(HALF_TICKS_PER_QUARTER));
    let fade_limit = (config.fade_ms / 1000.0 * rate).round() as usize;

    let mut samples: Vec<i16> = Vec::new();
    let mut elapsed_half_ticks: u64 = 0;
    for note in &score.notes {
        let start = to_samples(elapsed_half_ticks, seconds_per_half_tick, rate);
        elapsed_half_ticks += u64::from(note.duration.half_ticks());
        let end = to_samples(elapsed_half_ticks, seconds_per_half_tick, rate);
        let count = end.saturating_sub(start);

        match note.pitch.frequency() {
            Err(_) => samples.resize(samples.len() + count, 0),
            Ok(frequency) => {
                let fade = fade_limit.min(count / 2);
                for i in 0..count {
                    let level = (i as f64 * frequency / rate * std::f64::consts::TAU).sin();
                    let mut gain = config.amplitude;
                    if fade > 0 {
                        let head = (i + 1) as f64 / fade as f64;
                        let tail = (count - i) as f64 / fade as f64;
                        gain *= head.min(tail).min(1.0);
                    }
                    samples.push((level * gain * 32767.0).round() as i16);
                }
            }
        }
    }
    Ok(wrap_wav(&samples, config.sample_rate))
}

fn to_samples(half_ticks: u64, seconds_per_half_tick: f64, rate: f64) -> usize {
    (half_ticks as f64 * seconds_per_half_tick * rate).round() as usize
}

fn wrap_wav(samples: &[i16], sample_rate: u32) -> Vec<u8> {
    let data_len = (samples.len() * 2) as u32;
    let mut out = Vec::with_capacity(44 + samples.len() * 2);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes()); // bits per sample
    out.extend_from_slice(b"data");
    out.extend_from_slice(&data_len.to_le_bytes());
    for sample in samples {
        out.extend_from_slice(&sample.to_le_bytes());
    }
    out
}
