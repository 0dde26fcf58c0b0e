//! Content-diversity attributes of an audio-visual sequence: five video
//! attributes averaged over sampled frames and four short-time audio
//! attributes.

pub mod audio;
mod histogram;
pub mod video;

pub use self::audio::{
    frame_audio, sef, spectral_centroid, spectral_entropy, zcr, AudioFrames, ATTRIBUTE_HOP_S, ATTRIBUTE_WINDOW_S,
};
pub use self::histogram::{histogram, write_histogram_csv, HistogramBin};
pub use self::video::{colorfulness, contrast, cpbd, spatial_information, temporal_information, Cpbd, GradientField};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::media::{sample_frames, to_grayscale, AudioSignal, FrameSequence, GrayFrame};
use crate::stats::mean;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VideoAttributeVector {
    pub contrast: f64,
    pub colorfulness: f64,
    pub cpbd: f64,
    pub si: f64,
    pub ti: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AudioAttributeVector {
    pub sef: f64,
    pub zcr: f64,
    /// Hz.
    pub sc: f64,
    pub se: f64,
}

/// Conditions under which an attribute fell back to a conventional value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeFlags {
    /// Sampled frames without measurable edges (CPBD taken as 1.0).
    pub edgeless_frames: usize,
    /// Only one sampled frame, so TI is 0.
    pub single_frame: bool,
    /// Audio was digital silence.
    pub silent_audio: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AttributeReport {
    pub video: VideoAttributeVector,
    pub audio: AudioAttributeVector,
    pub flags: AttributeFlags,
}

pub const ATTRIBUTE_NAMES: [&str; 9] = ["contrast", "colorfulness", "cpbd", "si", "ti", "sef", "zcr", "sc", "se"];

impl AttributeReport {
    pub fn values(&self) -> [f64; 9] {
        let (v, a) = (&self.video, &self.audio);
        [v.contrast, v.colorfulness, v.cpbd, v.si, v.ti, a.sef, a.zcr, a.sc, a.se]
    }
}

pub fn video_attributes(seq: &FrameSequence, stride: usize) -> Result<(VideoAttributeVector, AttributeFlags)> {
    let sampled = sample_frames(seq, stride)?;
    let grays: Vec<GrayFrame> = sampled.frames().iter().map(to_grayscale).collect();

    let cpbds: Vec<Cpbd> = grays.iter().map(cpbd).collect();
    let si = grays.iter().map(spatial_information).collect::<Result<Vec<_>>>()?;
    let ti = grays
        .windows(2)
        .map(|p| temporal_information(&p[0], &p[1]))
        .collect::<Result<Vec<_>>>()?;

    let attrs = VideoAttributeVector {
        contrast: mean(&grays.iter().map(contrast).collect::<Vec<_>>()),
        colorfulness: mean(&sampled.frames().iter().map(colorfulness).collect::<Vec<_>>()),
        cpbd: mean(&cpbds.iter().map(|c| c.score).collect::<Vec<_>>()),
        si: mean(&si),
        ti: mean(&ti),
    };
    let flags = AttributeFlags {
        edgeless_frames: cpbds.iter().filter(|c| c.edgeless).count(),
        single_frame: grays.len() == 1,
        silent_audio: false,
    };
    Ok((attrs, flags))
}

pub fn audio_attributes(signal: &AudioSignal) -> Result<AudioAttributeVector> {
    let frames = frame_audio(signal, ATTRIBUTE_WINDOW_S, ATTRIBUTE_HOP_S)?;
    Ok(AudioAttributeVector {
        sef: sef(&frames),
        zcr: zcr(&frames),
        sc: spectral_centroid(&frames),
        se: spectral_entropy(&frames),
    })
}

/// All nine attributes of one sequence. Video attributes use every
/// `stride`-th frame.
pub fn compute_attributes(seq: &FrameSequence, audio: &AudioSignal, stride: usize) -> Result<AttributeReport> {
    let (video, mut flags) = video_attributes(seq, stride)?;
    flags.silent_audio = audio.is_silent();
    Ok(AttributeReport {
        video,
        audio: audio_attributes(audio)?,
        flags,
    })
}
