//! 16-bit mono PCM WAV files.

use std::io::Cursor;
use std::path::Path;

use uwpd_bss_core::Signal;

use crate::error::{io_error, Error, Result};
use crate::fsutil::write_atomic;

const FULL_SCALE: f64 = 32768.0;

/// Problem with the contents of a WAV stream; the message names the offending
/// header field.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct WavFormatError(pub String);

/// Decodes a 16-bit mono PCM stream to samples in [-1, 1).
pub fn decode_wav(bytes: &[u8]) -> std::result::Result<Signal, WavFormatError> {
    let reader = hound::WavReader::new(Cursor::new(bytes))
        .map_err(|e| WavFormatError(format!("header: {e}")))?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(WavFormatError(format!(
            "channels: expected 1, found {}",
            spec.channels
        )));
    }
    if spec.sample_format != hound::SampleFormat::Int {
        return Err(WavFormatError(
            "sample_format: expected integer PCM, found float".into(),
        ));
    }
    if spec.bits_per_sample != 16 {
        return Err(WavFormatError(format!(
            "bits_per_sample: expected 16, found {}",
            spec.bits_per_sample
        )));
    }
    let samples = reader
        .into_samples::<i16>()
        .map(|s| s.map(|v| v as f64 / FULL_SCALE))
        .collect::<std::result::Result<Vec<f64>, _>>()
        .map_err(|e| WavFormatError(format!("data: {e}")))?;
    Signal::new(samples, spec.sample_rate).map_err(|e| WavFormatError(format!("data: {e}")))
}

/// Quantizes to 16 bits with round-to-nearest; values outside [-1, 1) clip.
pub fn encode_wav(signal: &Signal) -> Vec<u8> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: signal.sample_rate_hz(),
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut cursor = Cursor::new(Vec::new());
    {
        let mut writer = hound::WavWriter::new(&mut cursor, spec).expect("in-memory header");
        for &v in signal.samples() {
            writer.write_sample(quantize(v)).expect("in-memory write");
        }
        writer.finalize().expect("in-memory finalize");
    }
    cursor.into_inner()
}

pub fn quantize(v: f64) -> i16 {
    (v * FULL_SCALE)
        .round()
        .clamp(i16::MIN as f64, i16::MAX as f64) as i16
}

pub fn read_wav(path: &Path) -> Result<Signal> {
    let bytes = std::fs::read(path).map_err(io_error(path))?;
    decode_wav(&bytes).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        message: e.0,
    })
}

pub fn write_wav(path: &Path, signal: &Signal) -> Result<()> {
    write_atomic(path, &encode_wav(signal))
}
