use std::io::{Read, Seek, Write};
use std::path::Path;

use hound::{SampleFormat, WavReader, WavSpec, WavWriter};

use super::AudioSignal;
use crate::error::{Error, Result};

/// Decodes 16-bit integer or 32-bit float WAV data, downmixes stereo by
/// averaging and peak-normalizes.
pub fn read_wav<R: Read>(reader: R) -> Result<AudioSignal> {
    let reader = WavReader::new(reader).map_err(|e| match e {
        hound::Error::Unsupported => Error::UnsupportedAudio("non-PCM codec".into()),
        other => Error::Wav(other),
    })?;
    let spec = reader.spec();
    if !(1..=2).contains(&spec.channels) {
        return Err(Error::UnsupportedAudio(format!("{} channels", spec.channels)));
    }
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / 32768.0))
            .collect::<Result<_, _>>()?,
        (SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<Result<_, _>>()?,
        (fmt, bits) => {
            return Err(Error::UnsupportedAudio(format!("{bits}-bit {fmt:?} samples")));
        }
    };
    if interleaved.is_empty() {
        return Err(Error::EmptyAudio);
    }
    let ch = usize::from(spec.channels);
    let mono = interleaved
        .chunks_exact(ch)
        .map(|frame| frame.iter().sum::<f64>() / ch as f64)
        .collect();
    AudioSignal::from_samples(mono, spec.sample_rate)
}

pub fn load_wav(path: impl AsRef<Path>) -> Result<AudioSignal> {
    read_wav(std::io::BufReader::new(std::fs::File::open(path)?))
}

/// Writes interleaved 16-bit PCM.
pub fn write_wav_i16<W: Write + Seek>(writer: W, channels: u16, sample_rate: u32, samples: &[i16]) -> Result<()> {
    let spec = WavSpec {
        channels,
        sample_rate,
        bits_per_sample: 16,
        sample_format: SampleFormat::Int,
    };
    let mut w = WavWriter::new(writer, spec)?;
    for &s in samples {
        w.write_sample(s)?;
    }
    w.finalize()?;
    Ok(())
}

/// Writes interleaved 32-bit float samples.
pub fn write_wav_f32<W: Write + Seek>(writer: W, channels: u16, sample_rate: u32, samples: &[f32]) -> Result<()> {
    let spec = WavSpec {
        channels,
        sample_rate,
        bits_per_sample: 32,
        sample_format: SampleFormat::Float,
    };
    let mut w = WavWriter::new(writer, spec)?;
    for &s in samples {
        w.write_sample(s)?;
    }
    w.finalize()?;
    Ok(())
}
