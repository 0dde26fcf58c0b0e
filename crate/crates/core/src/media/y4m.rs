//! YUV4MPEG2 reading and writing (8-bit, 4:2:0 and 4:4:4 only).

use std::fs;
use std::path::Path;

use super::{FrameSequence, RgbFrame};
use crate::error::{Error, Result};

const MAGIC: &[u8] = b"YUV4MPEG2";
const FRAME_TAG: &[u8] = b"FRAME";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Chroma {
    C420,
    C444,
}

impl Chroma {
    fn parse(tag: &str) -> Result<Self> {
        match tag {
            "420" | "420jpeg" | "420paldv" | "420mpeg2" => Ok(Chroma::C420),
            "444" => Ok(Chroma::C444),
            other => Err(Error::UnsupportedChroma(other.to_string())),
        }
    }

    fn tag(self) -> &'static str {
        match self {
            Chroma::C420 => "420jpeg",
            Chroma::C444 => "444",
        }
    }

    fn plane_size(self, width: usize, height: usize) -> (usize, usize) {
        match self {
            Chroma::C420 => (width.div_ceil(2), height.div_ceil(2)),
            Chroma::C444 => (width, height),
        }
    }
}

/// Raw planar YUV payload of one frame.
#[derive(Clone, Debug)]
pub struct YuvFrame {
    pub y: Vec<u8>,
    pub u: Vec<u8>,
    pub v: Vec<u8>,
}

struct Header {
    width: usize,
    height: usize,
    rate: f64,
    chroma: Chroma,
}

fn parse_header(line: &[u8]) -> Result<Header> {
    let line = std::str::from_utf8(line).map_err(|_| Error::MalformedHeader("header is not ASCII".into()))?;
    let mut tokens = line.split(' ').filter(|t| !t.is_empty());
    if tokens.next().map(str::as_bytes) != Some(MAGIC) {
        return Err(Error::MalformedHeader("missing YUV4MPEG2 signature".into()));
    }
    let (mut width, mut height, mut rate, mut chroma) = (None, None, None, Chroma::C420);
    for tok in tokens {
        let (tag, val) = tok.split_at(1);
        let bad = || Error::MalformedHeader(format!("bad parameter `{tok}`"));
        match tag {
            "W" => width = Some(val.parse::<usize>().map_err(|_| bad())?),
            "H" => height = Some(val.parse::<usize>().map_err(|_| bad())?),
            "F" => {
                let (n, d) = val.split_once(':').ok_or_else(bad)?;
                let n: f64 = n.parse::<u64>().map_err(|_| bad())? as f64;
                let d: f64 = d.parse::<u64>().map_err(|_| bad())? as f64;
                if n == 0.0 || d == 0.0 {
                    return Err(bad());
                }
                rate = Some(n / d);
            }
            "C" => chroma = Chroma::parse(val)?,
            // interlacing, aspect ratio, comments and vendor extensions
            _ => {}
        }
    }
    let width = width
        .filter(|&w| w > 0)
        .ok_or_else(|| Error::MalformedHeader("missing width".into()))?;
    let height = height
        .filter(|&h| h > 0)
        .ok_or_else(|| Error::MalformedHeader("missing height".into()))?;
    let rate = rate.ok_or_else(|| Error::MalformedHeader("missing frame rate".into()))?;
    Ok(Header {
        width,
        height,
        rate,
        chroma,
    })
}

#[inline]
fn clamp_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// BT.601 full-range YCbCr to RGB.
#[inline]
fn yuv_to_rgb(y: u8, u: u8, v: u8) -> [u8; 3] {
    let (y, u, v) = (f64::from(y), f64::from(u) - 128.0, f64::from(v) - 128.0);
    [
        clamp_u8(y + 1.402 * v),
        clamp_u8(y - 0.344_136 * u - 0.714_136 * v),
        clamp_u8(y + 1.772 * u),
    ]
}

#[inline]
fn rgb_to_yuv([r, g, b]: [u8; 3]) -> [u8; 3] {
    let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
    [
        clamp_u8(0.299 * r + 0.587 * g + 0.114 * b),
        clamp_u8(128.0 - 0.168_736 * r - 0.331_264 * g + 0.5 * b),
        clamp_u8(128.0 + 0.5 * r - 0.418_688 * g - 0.081_312 * b),
    ]
}

fn frame_to_rgb(h: &Header, y: &[u8], u: &[u8], v: &[u8]) -> RgbFrame {
    let (cw, _) = h.chroma.plane_size(h.width, h.height);
    RgbFrame::from_fn(h.width, h.height, |x, row| {
        let ci = match h.chroma {
            Chroma::C420 => (row / 2) * cw + x / 2,
            Chroma::C444 => row * cw + x,
        };
        yuv_to_rgb(y[row * h.width + x], u[ci], v[ci])
    })
}

/// Decodes a complete Y4M byte stream into RGB frames.
pub fn read_y4m(bytes: &[u8]) -> Result<FrameSequence> {
    let eol = bytes
        .iter()
        .position(|&b| b == b'\n')
        .ok_or_else(|| Error::MalformedHeader("unterminated header".into()))?;
    let header = parse_header(&bytes[..eol])?;
    let (cw, ch) = header.chroma.plane_size(header.width, header.height);
    let luma = header.width * header.height;
    let payload = luma + 2 * cw * ch;

    let mut pos = eol + 1;
    let mut frames = Vec::new();
    while pos < bytes.len() {
        let idx = frames.len();
        let rest = &bytes[pos..];
        let line_end = match rest.iter().position(|&b| b == b'\n') {
            Some(e) => e,
            None if FRAME_TAG.starts_with(rest) || rest.starts_with(FRAME_TAG) => {
                return Err(Error::TruncatedFrame { frame: idx })
            }
            None => return Err(Error::MalformedHeader(format!("garbage before frame {idx}"))),
        };
        let tag = &rest[..line_end];
        if !tag.starts_with(FRAME_TAG) || (tag.len() > FRAME_TAG.len() && tag[FRAME_TAG.len()] != b' ') {
            return Err(Error::MalformedHeader(format!("expected FRAME marker for frame {idx}")));
        }
        pos += line_end + 1;
        if bytes.len() - pos < payload {
            return Err(Error::TruncatedFrame { frame: idx });
        }
        let data = &bytes[pos..pos + payload];
        let (y, chroma) = data.split_at(luma);
        let (u, v) = chroma.split_at(cw * ch);
        frames.push(frame_to_rgb(&header, y, u, v));
        pos += payload;
    }
    if frames.is_empty() {
        return Err(Error::NoFrames);
    }
    FrameSequence::new(frames, header.rate)
}

pub fn load_y4m(path: impl AsRef<Path>) -> Result<FrameSequence> {
    read_y4m(&fs::read(path)?)
}

/// Serializes raw YUV planes. The frame rate is written as `num:den`.
pub fn encode_y4m(width: usize, height: usize, rate: (u32, u32), chroma: Chroma, frames: &[YuvFrame]) -> Vec<u8> {
    let mut out = format!(
        "YUV4MPEG2 W{width} H{height} F{}:{} Ip A1:1 C{}\n",
        rate.0,
        rate.1,
        chroma.tag()
    )
    .into_bytes();
    for f in frames {
        out.extend_from_slice(b"FRAME\n");
        out.extend_from_slice(&f.y);
        out.extend_from_slice(&f.u);
        out.extend_from_slice(&f.v);
    }
    out
}

/// Writes an RGB sequence as 4:4:4 Y4M. The conversion is lossy by at most
/// a couple of code values per channel.
pub fn write_y4m(path: impl AsRef<Path>, seq: &FrameSequence) -> Result<()> {
    let frames: Vec<YuvFrame> = seq
        .frames()
        .iter()
        .map(|f| {
            let n = f.width() * f.height();
            let mut yuv = YuvFrame {
                y: Vec::with_capacity(n),
                u: Vec::with_capacity(n),
                v: Vec::with_capacity(n),
            };
            for [y, u, v] in f.pixels().map(rgb_to_yuv) {
                yuv.y.push(y);
                yuv.u.push(u);
                yuv.v.push(v);
            }
            yuv
        })
        .collect();
    let rate = seq.frame_rate();
    let (num, den) = if rate.fract() == 0.0 {
        (rate as u32, 1)
    } else {
        ((rate * 1001.0).round() as u32, 1001)
    };
    fs::write(
        path,
        encode_y4m(seq.width(), seq.height(), (num, den), Chroma::C444, &frames),
    )?;
    Ok(())
}
