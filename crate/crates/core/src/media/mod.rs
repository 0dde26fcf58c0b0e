//! Decoded media and the alignment between sampled video frames and audio.
//!
//! Video is ingested from uncompressed YUV4MPEG2 and audio from RIFF/WAVE;
//! anything else must be transcoded beforehand.

mod wav;
mod y4m;

pub use self::wav::{load_wav, read_wav, write_wav_f32, write_wav_i16};
pub use self::y4m::{encode_y4m, load_y4m, read_y4m, write_y4m, Chroma, YuvFrame};

use crate::error::{Error, Result};

/// Stride used for every per-frame video computation.
pub const DEFAULT_FRAME_STRIDE: usize = 10;

/// An 8-bit RGB frame stored as interleaved `RGBRGB...` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RgbFrame {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl RgbFrame {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("frame must be at least 1x1".into()));
        }
        if data.len() != width * height * 3 {
            return Err(Error::DimensionMismatch {
                expected: width * height * 3,
                found: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        let data = rgb.iter().copied().cycle().take(width * height * 3).collect();
        Self { width, height, data }
    }

    /// Builds a frame from a per-pixel closure `(x, y) -> [r, g, b]`.
    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> [u8; 3]) -> Self {
        let mut data = Vec::with_capacity(width * height * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn pixel(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn pixels(&self) -> impl Iterator<Item = [u8; 3]> + '_ {
        self.data.chunks_exact(3).map(|p| [p[0], p[1], p[2]])
    }
}

/// Floating-point intensities on the 0-255 scale, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GrayFrame {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayFrame {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidInput("frame must be at least 1x1".into()));
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                found: data.len(),
            });
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// BT.601 luma `0.299 R + 0.587 G + 0.114 B`, left unquantized.
pub fn to_grayscale(frame: &RgbFrame) -> GrayFrame {
    let data = frame
        .pixels()
        .map(|[r, g, b]| 0.299 * f64::from(r) + 0.587 * f64::from(g) + 0.114 * f64::from(b))
        .collect();
    GrayFrame {
        width: frame.width,
        height: frame.height,
        data,
    }
}

/// Decoded video with per-frame presentation times.
#[derive(Clone, Debug)]
pub struct FrameSequence {
    frames: Vec<RgbFrame>,
    width: usize,
    height: usize,
    frame_rate: f64,
    timestamps: Vec<f64>,
}

impl FrameSequence {
    /// Frames at a constant rate; frame `i` is presented at `i / frame_rate`.
    pub fn new(frames: Vec<RgbFrame>, frame_rate: f64) -> Result<Self> {
        let timestamps = (0..frames.len()).map(|i| i as f64 / frame_rate).collect();
        Self::with_timestamps(frames, frame_rate, timestamps)
    }

    pub fn with_timestamps(frames: Vec<RgbFrame>, frame_rate: f64, timestamps: Vec<f64>) -> Result<Self> {
        let first = frames.first().ok_or(Error::NoFrames)?;
        if !(frame_rate.is_finite() && frame_rate > 0.0) {
            return Err(Error::InvalidInput(format!(
                "frame rate must be positive, got {frame_rate}"
            )));
        }
        let (width, height) = (first.width, first.height);
        if let Some(bad) = frames.iter().find(|f| f.width != width || f.height != height) {
            return Err(Error::InvalidInput(format!(
                "frame size {}x{} differs from {}x{}",
                bad.width, bad.height, width, height
            )));
        }
        if timestamps.len() != frames.len() {
            return Err(Error::DimensionMismatch {
                expected: frames.len(),
                found: timestamps.len(),
            });
        }
        if timestamps.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("timestamps must be strictly increasing".into()));
        }
        Ok(Self {
            frames,
            width,
            height,
            frame_rate,
            timestamps,
        })
    }

    pub fn frames(&self) -> &[RgbFrame] {
        &self.frames
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn frame_rate(&self) -> f64 {
        self.frame_rate
    }

    pub fn timestamps(&self) -> &[f64] {
        &self.timestamps
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Keeps frames `0, stride, 2*stride, ...` together with their timestamps.
pub fn sample_frames(seq: &FrameSequence, stride: usize) -> Result<FrameSequence> {
    if stride == 0 {
        return Err(Error::InvalidInput("frame stride must be at least 1".into()));
    }
    let frames = seq.frames.iter().step_by(stride).cloned().collect();
    let timestamps = seq.timestamps.iter().step_by(stride).copied().collect();
    Ok(FrameSequence {
        frames,
        width: seq.width,
        height: seq.height,
        frame_rate: seq.frame_rate,
        timestamps,
    })
}

/// Mono audio with amplitudes in `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct AudioSignal {
    samples: Vec<f64>,
    sample_rate: u32,
    silent: bool,
}

impl AudioSignal {
    /// Peak-normalizes `samples` so that `max |x| = 1`.
    ///
    /// An all-zero input is kept as is and marked silent.
    pub fn from_samples(mut samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidInput("sample rate must be positive".into()));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(Error::NonFinite("audio samples".into()));
        }
        let peak = samples.iter().fold(0.0f64, |m, s| m.max(s.abs()));
        let silent = peak == 0.0;
        if !silent {
            samples.iter_mut().for_each(|s| *s /= peak);
        }
        Ok(Self {
            samples,
            sample_rate,
            silent,
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn duration(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }

    /// True when normalization was skipped because every sample is zero.
    pub fn is_silent(&self) -> bool {
        self.silent
    }
}

/// A contiguous stretch of audio attached to one sampled video frame.
#[derive(Clone, Copy, Debug)]
pub struct AudioSegment<'a> {
    pub start: f64,
    pub end: f64,
    pub samples: &'a [f64],
}

/// Splits `audio` into one segment per sampled frame.
///
/// Boundaries sit halfway between consecutive frame timestamps; the first
/// segment starts at 0 and the last one ends at the audio duration, so the
/// segments tile the whole signal.
pub fn segment_audio<'a>(audio: &'a AudioSignal, sampled: &FrameSequence) -> Result<Vec<AudioSegment<'a>>> {
    let ts = sampled.timestamps();
    let last = *ts.last().ok_or(Error::NoFrames)?;
    let duration = audio.duration();
    if duration < last {
        return Err(Error::InvalidInput(format!(
            "audio lasts {duration:.3} s but the last sampled frame is at {last:.3} s"
        )));
    }
    let fs = f64::from(audio.sample_rate);
    let n = audio.samples.len();

    let mut bounds = Vec::with_capacity(ts.len() + 1);
    bounds.push(0.0);
    bounds.extend(ts.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    bounds.push(duration);

    let index = |t: f64| ((t * fs).round() as usize).min(n);
    Ok(bounds
        .windows(2)
        .map(|b| {
            let (lo, hi) = (index(b[0]), index(b[1]).max(index(b[0])));
            AudioSegment {
                start: b[0],
                end: b[1],
                samples: &audio.samples[lo..hi],
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gray_sequence(len: usize, rate: f64) -> FrameSequence {
        let frames = (0..len).map(|i| RgbFrame::filled(4, 4, [i as u8; 3])).collect();
        FrameSequence::new(frames, rate).unwrap()
    }

    #[test]
    fn grayscale_known_values() {
        let white = RgbFrame::filled(1, 1, [255, 255, 255]);
        assert!((to_grayscale(&white).at(0, 0) - 255.0).abs() < 1e-12);
        let red = RgbFrame::filled(1, 1, [255, 0, 0]);
        assert!((to_grayscale(&red).at(0, 0) - 76.245).abs() < 1e-12);
    }

    #[test]
    fn sampling_counts() {
        assert_eq!(sample_frames(&gray_sequence(240, 30.0), 10).unwrap().len(), 24);
        let seven = sample_frames(&gray_sequence(7, 30.0), 10).unwrap();
        assert_eq!(seven.len(), 1);
        assert_eq!(seven.frames()[0].pixel(0, 0), [0, 0, 0]);
        let seq = gray_sequence(13, 30.0);
        let same = sample_frames(&seq, 1).unwrap();
        assert_eq!(same.frames(), seq.frames());
        assert_eq!(same.timestamps(), seq.timestamps());
        assert!(sample_frames(&seq, 0).is_err());
    }

    #[test]
    fn sampling_keeps_timestamps() {
        let seq = gray_sequence(25, 10.0);
        let s = sample_frames(&seq, 10).unwrap();
        assert_eq!(s.timestamps(), &[0.0, 1.0, 2.0]);
    }

    #[test]
    fn midpoint_segments() {
        let audio = AudioSignal::from_samples(vec![0.5; 8 * 1000], 1000).unwrap();
        let sampled = sample_frames(&gray_sequence(80, 10.0), 10).unwrap();
        let segs = segment_audio(&audio, &sampled).unwrap();
        assert_eq!(segs.len(), 8);
        let mut expected = vec![0.0, 0.5, 1.5, 2.5, 3.5, 4.5, 5.5, 6.5];
        let starts: Vec<f64> = segs.iter().map(|s| s.start).collect();
        for (a, b) in starts.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12, "{starts:?}");
        }
        expected.remove(0);
        expected.push(8.0);
        for (s, e) in segs.iter().zip(&expected) {
            assert!((s.end - e).abs() < 1e-12);
        }
        assert_eq!(segs[0].samples.len(), 500);
        assert_eq!(segs[7].samples.len(), 1500);
    }

    #[test]
    fn single_frame_segment_covers_everything() {
        let audio = AudioSignal::from_samples(vec![0.1; 1234], 8000).unwrap();
        let sampled = gray_sequence(1, 25.0);
        let segs = segment_audio(&audio, &sampled).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].samples.len(), 1234);
    }

    #[test]
    fn audio_shorter_than_video_is_rejected() {
        let audio = AudioSignal::from_samples(vec![0.1; 100], 100).unwrap();
        let sampled = sample_frames(&gray_sequence(30, 10.0), 10).unwrap();
        assert!(segment_audio(&audio, &sampled).is_err());
    }

    #[test]
    fn silent_audio_is_flagged() {
        let a = AudioSignal::from_samples(vec![0.0; 10], 10).unwrap();
        assert!(a.is_silent());
        assert!(a.samples().iter().all(|&s| s == 0.0));
    }

    proptest! {
        #[test]
        fn sampled_length_is_ceil(len in 1usize..200, stride in 1usize..40) {
            let s = sample_frames(&gray_sequence(len, 25.0), stride).unwrap();
            prop_assert_eq!(s.len(), len.div_ceil(stride));
        }

        #[test]
        fn segments_tile_the_signal(
            n_frames in 1usize..120,
            stride in 1usize..15,
            rate in 5.0f64..60.0,
            fs in prop::sample::select(vec![8000u32, 16000, 44100, 48000]),
            extra in 0.0f64..1.0,
        ) {
            let seq = sample_frames(&gray_sequence(n_frames, rate), stride).unwrap();
            let duration = seq.timestamps().last().unwrap() + extra + 1.0 / rate;
            let n = (duration * f64::from(fs)).ceil() as usize;
            let audio = AudioSignal::from_samples(vec![0.25; n], fs).unwrap();
            let segs = segment_audio(&audio, &seq).unwrap();
            prop_assert_eq!(segs.len(), seq.len());
            prop_assert_eq!(segs.iter().map(|s| s.samples.len()).sum::<usize>(), n);
            prop_assert_eq!(segs[0].start, 0.0);
            for w in segs.windows(2) {
                prop_assert_eq!(w[0].end, w[1].start);
                let end = w[0].samples.as_ptr_range().end;
                prop_assert_eq!(end, w[1].samples.as_ptr());
            }
        }

        #[test]
        fn grayscale_stays_in_range(r: u8, g: u8, b: u8) {
            let v = to_grayscale(&RgbFrame::filled(1, 1, [r, g, b])).at(0, 0);
            prop_assert!((0.0..=255.0).contains(&v));
        }

        #[test]
        fn equal_channels_give_same_luma(x: u8) {
            let v = to_grayscale(&RgbFrame::filled(1, 1, [x, x, x])).at(0, 0);
            prop_assert!((v - f64::from(x)).abs() < 1e-9);
        }

        #[test]
        fn peak_is_one_for_nonsilent(xs in prop::collection::vec(-3.0f64..3.0, 1..200)) {
            prop_assume!(xs.iter().any(|x| *x != 0.0));
            let a = AudioSignal::from_samples(xs, 16000).unwrap();
            let peak = a.samples().iter().fold(0.0f64, |m, s| m.max(s.abs()));
            prop_assert_eq!(peak, 1.0);
        }
    }
}
