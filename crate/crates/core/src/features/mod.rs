//! Quality-aware feature vectors: BRISQUE statistics for video, pooled MFCCs
//! for audio, and the `(w, h, f_v, f_a)` regression input.

pub mod mfcc;
pub mod nss;

use std::io::{Read, Write};

pub use self::mfcc::{audio_features, mfcc, AudioFeatures, Cepstrum, MfccExtractor, AUDIO_FEATURE_DIM, MFCC_COEFFS};
pub use self::nss::{aggd_fit, brisque_frame, ggd_fit, mscn, video_features, AggdParams, GgdParams, BRISQUE_DIM};

use crate::error::{Error, Result};
use crate::media::{sample_frames, segment_audio, AudioSignal, FrameSequence};

/// Length of the full vector: resolution, video block, audio block.
pub const FULL_DIM: usize = 2 + BRISQUE_DIM + AUDIO_FEATURE_DIM;
/// Length of the vector without the audio block.
pub const VIDEO_ONLY_DIM: usize = 2 + BRISQUE_DIM;

/// Column names in layout order: `w`, `h`, `fv_*`, then optionally
/// `fa_mean_*` and `fa_std_*`.
pub fn feature_names(with_audio: bool) -> Vec<String> {
    let mut names = vec!["w".to_string(), "h".to_string()];
    names.extend((0..BRISQUE_DIM).map(|i| format!("fv_{i}")));
    if with_audio {
        names.extend((0..MFCC_COEFFS).map(|i| format!("fa_mean_{i}")));
        names.extend((0..MFCC_COEFFS).map(|i| format!("fa_std_{i}")));
    }
    names
}

/// A named regression input. Values are finite and the names follow
/// [`feature_names`].
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureVector {
    names: Vec<String>,
    values: Vec<f64>,
}

impl FeatureVector {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_audio(&self) -> bool {
        self.values.len() == FULL_DIM
    }

    /// The same vector with the audio block dropped.
    pub fn without_audio(&self) -> Self {
        Self {
            names: self.names[..VIDEO_ONLY_DIM].to_vec(),
            values: self.values[..VIDEO_ONLY_DIM].to_vec(),
        }
    }

    fn from_parts(values: Vec<f64>) -> Result<Self> {
        let with_audio = match values.len() {
            FULL_DIM => true,
            VIDEO_ONLY_DIM => false,
            n => {
                return Err(Error::DimensionMismatch {
                    expected: FULL_DIM,
                    found: n,
                })
            }
        };
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("feature {}", feature_names(with_audio)[i])));
        }
        Ok(Self {
            names: feature_names(with_audio),
            values,
        })
    }
}

/// Concatenates resolution, video features and (unless `None`) audio
/// features.
pub fn assemble(
    width: usize,
    height: usize,
    video: &[f64; BRISQUE_DIM],
    audio: Option<&[f64; AUDIO_FEATURE_DIM]>,
) -> Result<FeatureVector> {
    let mut values = vec![width as f64, height as f64];
    values.extend_from_slice(video);
    if let Some(a) = audio {
        values.extend_from_slice(a);
    }
    FeatureVector::from_parts(values)
}

/// Full extraction for one sequence. Audio segments are cut around the
/// frames sampled at `stride`.
pub fn extract_features(seq: &FrameSequence, audio: Option<&AudioSignal>, stride: usize) -> Result<FeatureVector> {
    let fv = video_features(seq, stride)?;
    let fa = match audio {
        Some(signal) => {
            let sampled = sample_frames(seq, stride)?;
            let segments = segment_audio(signal, &sampled)?;
            Some(audio_features(&segments, signal.sample_rate())?.values())
        }
        None => None,
    };
    assemble(seq.width(), seq.height(), &fv, fa.as_ref())
}

/// One row of a feature cache.
#[derive(Clone, Debug, PartialEq)]
pub struct FeatureRecord {
    pub id: String,
    pub features: FeatureVector,
}

/// Writes records as CSV with an `id` column followed by the feature names.
/// Every record must share one layout.
pub fn write_feature_cache<W: Write>(writer: W, records: &[FeatureRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let Some(first) = records.first() else {
        w.flush()?;
        return Ok(());
    };
    let names = first.features.names();
    w.write_record(std::iter::once("id").chain(names.iter().map(String::as_str)))?;
    for r in records {
        if r.features.names() != names {
            return Err(Error::InvalidInput(format!(
                "record {} has a different feature layout",
                r.id
            )));
        }
        let mut row = vec![r.id.clone()];
        row.extend(r.features.values().iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_feature_cache<R: Read>(reader: R) -> Result<Vec<FeatureRecord>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    let expected = |audio: bool| {
        std::iter::once("id".to_string())
            .chain(feature_names(audio))
            .collect::<Vec<_>>()
    };
    if header != expected(true) && header != expected(false) {
        return Err(Error::InvalidInput(
            "feature cache header does not match a known layout".into(),
        ));
    }
    r.records()
        .enumerate()
        .map(|(line, rec)| {
            let rec = rec?;
            let values = rec
                .iter()
                .skip(1)
                .map(|v| {
                    v.parse::<f64>()
                        .map_err(|_| Error::InvalidInput(format!("row {}: bad number {v:?}", line + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(FeatureRecord {
                id: rec[0].to_string(),
                features: FeatureVector::from_parts(values)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::RgbFrame;
    use proptest::prelude::*;

    fn fv(seed: f64) -> [f64; BRISQUE_DIM] {
        std::array::from_fn(|i| seed * (i as f64 + 1.0).sqrt())
    }

    #[test]
    fn layouts_have_documented_lengths() {
        let fa = [0.25; AUDIO_FEATURE_DIM];
        let full = assemble(960, 720, &fv(1.0), Some(&fa)).unwrap();
        assert_eq!(full.len(), 64);
        assert!(full.has_audio());
        let short = assemble(960, 720, &fv(1.0), None).unwrap();
        assert_eq!(short.len(), 38);
        assert_eq!(full.without_audio(), short);
        assert_eq!(full.names()[0], "w");
        assert_eq!(full.names()[38], "fa_mean_0");
        assert_eq!(full.names()[63], "fa_std_12");
        assert_eq!(full.values()[..2], [960.0, 720.0]);
    }

    #[test]
    fn non_finite_blocks_are_rejected() {
        let mut v = fv(1.0);
        v[3] = f64::NAN;
        assert!(matches!(assemble(1, 1, &v, None), Err(Error::NonFinite(m)) if m.contains("fv_3")));
        let mut a = [0.0; AUDIO_FEATURE_DIM];
        a[0] = f64::INFINITY;
        assert!(assemble(1, 1, &fv(1.0), Some(&a)).is_err());
    }

    #[test]
    fn extraction_with_and_without_audio() {
        let frames: Vec<RgbFrame> = (0..20)
            .map(|t| {
                RgbFrame::from_fn(32, 24, |x, y| {
                    [((x * 7 + y * 3 + t) % 256) as u8, (x * y % 200) as u8, 90]
                })
            })
            .collect();
        let seq = FrameSequence::new(frames, 10.0).unwrap();
        let samples: Vec<f64> = (0..32_000)
            .map(|i| (i as f64 * 0.05).sin() * (1.0 + (i % 7) as f64))
            .collect();
        let audio = AudioSignal::from_samples(samples, 16_000).unwrap();
        let full = extract_features(&seq, Some(&audio), 10).unwrap();
        let short = extract_features(&seq, None, 10).unwrap();
        assert_eq!(full.len(), FULL_DIM);
        assert_eq!(full.without_audio(), short);
    }

    #[test]
    fn cache_rejects_unknown_headers() {
        assert!(read_feature_cache("id,w\na,1\n".as_bytes()).is_err());
        let mut out = Vec::new();
        let recs = vec![
            FeatureRecord {
                id: "a".into(),
                features: assemble(1, 1, &fv(1.0), None).unwrap(),
            },
            FeatureRecord {
                id: "b".into(),
                features: assemble(1, 1, &fv(1.0), Some(&[0.0; AUDIO_FEATURE_DIM])).unwrap(),
            },
        ];
        assert!(write_feature_cache(&mut out, &recs).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cache_round_trip_is_bit_exact(
            seeds in prop::collection::vec(-1e12f64..1e12, 1..5),
            audio in any::<bool>(),
            tiny in -1e-300f64..1e-300,
        ) {
            let records: Vec<FeatureRecord> = seeds
                .iter()
                .enumerate()
                .map(|(i, &s)| {
                    let mut fa = [tiny; AUDIO_FEATURE_DIM];
                    fa[1] = s / 3.0;
                    FeatureRecord {
                        id: format!("clip {i}"),
                        features: assemble(640, 480, &fv(s), audio.then_some(&fa)).unwrap(),
                    }
                })
                .collect();
            let mut buf = Vec::new();
            write_feature_cache(&mut buf, &records).unwrap();
            let back = read_feature_cache(buf.as_slice()).unwrap();
            prop_assert_eq!(back.len(), records.len());
            for (a, b) in back.iter().zip(&records) {
                prop_assert_eq!(&a.id, &b.id);
                let bits = |f: &FeatureVector| f.values().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
                prop_assert_eq!(bits(&a.features), bits(&b.features));
            }
        }
    }
}
