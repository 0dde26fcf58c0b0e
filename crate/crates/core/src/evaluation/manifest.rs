use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatabaseKind {
    /// Every sequence is its own content group.
    InTheWild,
    /// Several sequences share one reference content.
    ReferenceGrouped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub id: String,
    pub video: PathBuf,
    /// Empty when the sequence has no audio track.
    pub audio: PathBuf,
    pub group: String,
    pub mos: f64,
}

/// Sequences with their content group and MOS. Ids are unique and MOS
/// values finite.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetManifest {
    entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(entries: Vec<ManifestEntry>) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if e.id.is_empty() || e.group.is_empty() {
                return Err(Error::InvalidInput("manifest entries need an id and a group".into()));
            }
            if !seen.insert(e.id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate id `{}`", e.id)));
            }
            if !e.mos.is_finite() {
                return Err(Error::NonFinite(format!("MOS of `{}`", e.id)));
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[ManifestEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn kind(&self) -> DatabaseKind {
        if self.entries.iter().all(|e| e.group == e.id) {
            DatabaseKind::InTheWild
        } else {
            DatabaseKind::ReferenceGrouped
        }
    }

    /// Resolves relative media paths against `dir`.
    pub fn relative_to(mut self, dir: &Path) -> Self {
        for e in &mut self.entries {
            if e.video.is_relative() {
                e.video = dir.join(&e.video);
            }
            if !e.audio.as_os_str().is_empty() && e.audio.is_relative() {
                e.audio = dir.join(&e.audio);
            }
        }
        self
    }

    /// Reads `id,video,audio,group,mos`.
    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
        if header != ["id", "video", "audio", "group", "mos"] {
            return Err(Error::InvalidInput(format!(
                "manifest header must be id,video,audio,group,mos (got {})",
                header.join(",")
            )));
        }
        let entries = r
            .deserialize()
            .collect::<std::result::Result<Vec<ManifestEntry>, _>>()?;
        Self::new(entries)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let m = Self::read_csv(std::fs::File::open(path)?)?;
        Ok(m.relative_to(path.parent().unwrap_or(Path::new(""))))
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for e in &self.entries {
            w.serialize(e)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str, group: &str) -> ManifestEntry {
        ManifestEntry {
            id: id.into(),
            video: format!("{id}.y4m").into(),
            audio: PathBuf::new(),
            group: group.into(),
            mos: 50.0,
        }
    }

    #[test]
    fn kind_is_inferred_from_groups() {
        let wild = DatasetManifest::new(vec![entry("a", "a"), entry("b", "b")]).unwrap();
        assert_eq!(wild.kind(), DatabaseKind::InTheWild);
        let grouped = DatasetManifest::new(vec![entry("a", "r"), entry("b", "r")]).unwrap();
        assert_eq!(grouped.kind(), DatabaseKind::ReferenceGrouped);
    }

    #[test]
    fn rejects_duplicates_and_bad_mos() {
        assert!(DatasetManifest::new(vec![entry("a", "a"), entry("a", "b")]).is_err());
        let mut e = entry("a", "a");
        e.mos = f64::NAN;
        assert!(DatasetManifest::new(vec![e]).is_err());
    }

    #[test]
    fn csv_round_trip_and_paths() {
        let text = "id,video,audio,group,mos\nx, v/x.y4m ,a/x.wav,g1,61.25\ny,/abs/y.y4m,,g1,40\n";
        let m = DatasetManifest::read_csv(text.as_bytes()).unwrap();
        assert_eq!(m.entries()[0].video, PathBuf::from("v/x.y4m"));
        let mut out = Vec::new();
        m.write_csv(&mut out).unwrap();
        assert_eq!(DatasetManifest::read_csv(out.as_slice()).unwrap(), m);
        let m = m.relative_to(Path::new("/data"));
        assert_eq!(m.entries()[0].audio, PathBuf::from("/data/a/x.wav"));
        assert_eq!(m.entries()[1].video, PathBuf::from("/abs/y.y4m"));
        assert_eq!(m.entries()[1].audio, PathBuf::new());
        assert!(DatasetManifest::read_csv("id,video,group,mos\n".as_bytes()).is_err());
    }
}
