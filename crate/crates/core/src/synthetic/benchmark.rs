use std::f64::consts::PI;
use std::io::BufWriter;
use std::path::Path;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::Result;
use crate::evaluation::{DatasetManifest, ManifestEntry};
use crate::imgproc::gaussian_blur_rgb;
use crate::media::{write_wav_f32, write_y4m, AudioSignal, FrameSequence, RgbFrame};

/// A grid of clips: every content is rendered at every blur level and every
/// audio noise level. The pseudo-MOS falls linearly with a weighted sum of
/// the two degradation levels, plus small Gaussian noise.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkSpec {
    pub contents: usize,
    /// Gaussian blur sigma per level, in pixels.
    pub blur_sigmas: Vec<f64>,
    /// Signal-to-noise ratio per level, in dB.
    pub snr_db: Vec<f64>,
    pub width: usize,
    pub height: usize,
    pub frame_rate: f64,
    pub duration_s: f64,
    pub sample_rate: u32,
    /// Share of the degradation score taken by blur; the rest is audio noise.
    pub video_weight: f64,
    pub mos_noise_sd: f64,
    pub seed: u64,
}

impl Default for BenchmarkSpec {
    fn default() -> Self {
        Self {
            contents: 4,
            blur_sigmas: vec![0.0, 1.0, 2.0, 3.0, 4.0],
            snr_db: vec![40.0, 25.0, 15.0, 5.0, -5.0],
            width: 160,
            height: 144,
            frame_rate: 10.0,
            duration_s: 4.0,
            sample_rate: 16_000,
            video_weight: 0.6,
            mos_noise_sd: 2.0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchmarkItem {
    pub id: String,
    /// Content index, shared by all degraded versions of one source.
    pub content: usize,
    pub blur_level: usize,
    pub noise_level: usize,
    pub mos: f64,
}

impl BenchmarkItem {
    pub fn group(&self) -> String {
        format!("content{}", self.content)
    }
}

impl BenchmarkSpec {
    pub fn len(&self) -> usize {
        self.contents * self.blur_sigmas.len() * self.snr_db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Degradation in `[0, 1]`, 0 for the pristine corner of the grid.
    pub fn degradation(&self, blur_level: usize, noise_level: usize) -> f64 {
        let frac = |level: usize, n: usize| if n > 1 { level as f64 / (n - 1) as f64 } else { 0.0 };
        self.video_weight * frac(blur_level, self.blur_sigmas.len())
            + (1.0 - self.video_weight) * frac(noise_level, self.snr_db.len())
    }

    /// Items ordered by content, then blur level, then noise level.
    pub fn items(&self) -> Vec<BenchmarkItem> {
        let mut rng = self.rng(u64::MAX);
        let noise = Normal::new(0.0, self.mos_noise_sd).expect("finite sd");
        let mut out = Vec::with_capacity(self.len());
        for content in 0..self.contents {
            for blur_level in 0..self.blur_sigmas.len() {
                for noise_level in 0..self.snr_db.len() {
                    let clean = 85.0 - 70.0 * self.degradation(blur_level, noise_level);
                    out.push(BenchmarkItem {
                        id: format!("c{content}_b{blur_level}_n{noise_level}"),
                        content,
                        blur_level,
                        noise_level,
                        mos: (clean + noise.sample(&mut rng)).clamp(0.0, 100.0),
                    });
                }
            }
        }
        out
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    fn frame_count(&self) -> usize {
        (self.duration_s * self.frame_rate).round() as usize
    }

    /// Renders one clip: a panning texture blurred to the item's level and
    /// a content-specific sound with white noise at the item's SNR.
    pub fn render(&self, item: &BenchmarkItem) -> Result<(FrameSequence, AudioSignal)> {
        let frames = self.frame_count();
        let canvas = texture(
            item.content,
            self.width + 2 * frames,
            self.height,
            &mut self.rng(item.content as u64),
        );
        let sigma = self.blur_sigmas[item.blur_level];
        let video = (0..frames)
            .map(|t| {
                let frame = RgbFrame::from_fn(self.width, self.height, |x, y| canvas.pixel(x + 2 * t, y));
                gaussian_blur_rgb(&frame, sigma)
            })
            .collect();
        let video = FrameSequence::new(video, self.frame_rate)?;

        let n = (self.duration_s * f64::from(self.sample_rate)).round() as usize;
        let fs = f64::from(self.sample_rate);
        let clean: Vec<f64> = (0..n).map(|i| sound(item.content, i as f64 / fs)).collect();
        let rms = (clean.iter().map(|v| v * v).sum::<f64>() / n as f64).sqrt();
        let sd = rms * 10f64.powf(-self.snr_db[item.noise_level] / 20.0);
        let index = (item.content * self.blur_sigmas.len() + item.blur_level) * self.snr_db.len() + item.noise_level;
        let mut rng = self.rng(1000 + index as u64);
        let noise = Normal::new(0.0, sd).expect("finite sd");
        let noisy = clean.into_iter().map(|v| v + noise.sample(&mut rng)).collect();
        Ok((video, AudioSignal::from_samples(noisy, self.sample_rate)?))
    }
}

fn rgb(v: [f64; 3]) -> [u8; 3] {
    v.map(|c| c.round().clamp(0.0, 255.0) as u8)
}

/// Smooth random field from a coarse lattice of `cell` pixels.
fn value_noise(w: usize, h: usize, cell: usize, rng: &mut impl RngCore) -> Vec<f64> {
    let (gw, gh) = (w / cell + 2, h / cell + 2);
    let lattice: Vec<f64> = (0..gw * gh).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mut out = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            let (fx, fy) = (x as f64 / cell as f64, y as f64 / cell as f64);
            let (i, j) = (fx as usize, fy as usize);
            let (tx, ty) = (fx - i as f64, fy - j as f64);
            let at = |a: usize, b: usize| lattice[b * gw + a];
            let top = at(i, j) * (1.0 - tx) + at(i + 1, j) * tx;
            let bottom = at(i, j + 1) * (1.0 - tx) + at(i + 1, j + 1) * tx;
            out.push(top * (1.0 - ty) + bottom * ty);
        }
    }
    out
}

/// Multi-octave value noise with 1/f-like amplitudes; each content gets
/// its own lattice draws and tint.
fn texture(content: usize, w: usize, h: usize, rng: &mut ChaCha8Rng) -> RgbFrame {
    let octaves: Vec<(Vec<f64>, f64)> = [32usize, 16, 8, 4, 2]
        .iter()
        .map(|&cell| (value_noise(w, h, cell, rng), cell as f64 / 32.0))
        .collect();
    let norm: f64 = octaves.iter().map(|(_, a)| a).sum();
    let tint = [[1.0, 0.8, 0.6], [0.6, 0.9, 1.0], [0.9, 1.0, 0.7], [1.0, 0.7, 0.9]][content % 4];
    RgbFrame::from_fn(w, h, |x, y| {
        let v = octaves.iter().map(|(o, a)| a * o[y * w + x]).sum::<f64>() / norm;
        rgb(tint.map(|t| 128.0 + 150.0 * t * v))
    })
}

/// Harmonic tone with a syllable-rate envelope; pitch and rate vary by
/// content.
fn sound(content: usize, t: f64) -> f64 {
    let f0 = [150.0, 210.0, 280.0, 360.0][content % 4];
    let rate = [3.0, 4.0, 5.0, 3.5][content % 4];
    let tone: f64 = (1..=8).map(|k| (2.0 * PI * f0 * k as f64 * t).sin() / k as f64).sum();
    let envelope = 0.55 + 0.45 * (2.0 * PI * rate * t).sin();
    0.3 * tone * envelope
}

/// Renders every clip into `dir` as `<id>.y4m` and `<id>.wav`, writes
/// `manifest.csv` next to them and returns the manifest.
pub fn write_benchmark(dir: impl AsRef<Path>, spec: &BenchmarkSpec) -> Result<DatasetManifest> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir)?;
    let mut entries = Vec::with_capacity(spec.len());
    for item in spec.items() {
        let (video, audio) = spec.render(&item)?;
        let (v, a) = (format!("{}.y4m", item.id), format!("{}.wav", item.id));
        write_y4m(dir.join(&v), &video)?;
        let samples: Vec<f32> = audio.samples().iter().map(|&s| s as f32).collect();
        write_wav_f32(
            BufWriter::new(std::fs::File::create(dir.join(&a))?),
            1,
            spec.sample_rate,
            &samples,
        )?;
        entries.push(ManifestEntry {
            group: item.group(),
            id: item.id,
            video: v.into(),
            audio: a.into(),
            mos: item.mos,
        });
    }
    let manifest = DatasetManifest::new(entries)?;
    manifest.write_csv(std::fs::File::create(dir.join("manifest.csv"))?)?;
    Ok(manifest.relative_to(dir))
}
