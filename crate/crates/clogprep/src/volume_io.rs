//! Reading and writing frame stacks.
//!
//! Two on-disk forms are accepted:
//!
//! * a directory of `frame_00000.png`, `frame_00001.png`, ... holding 8-bit RGB
//!   frames of identical size, numbered from zero without gaps;
//! * a `.cvol` container: `b"CVOL"`, then little-endian `u32` version (= 1),
//!   width, height, depth and channels (= 3), then the samples in frame-major,
//!   row-major, RGB-interleaved order.

use std::fs;
use std::path::{Path, PathBuf};

use clogprep_core::VolumeTensor;
use image::{DynamicImage, RgbImage};

use crate::error::{Error, Result};

pub const CVOL_MAGIC: &[u8; 4] = b"CVOL";
pub const CVOL_VERSION: u32 = 1;
pub const CVOL_HEADER_LEN: usize = 24;

pub fn encode_cvol(v: &VolumeTensor) -> Vec<u8> {
    let mut out = Vec::with_capacity(CVOL_HEADER_LEN + v.data().len());
    out.extend_from_slice(CVOL_MAGIC);
    for field in [CVOL_VERSION, v.width() as u32, v.height() as u32, v.depth() as u32, 3] {
        out.extend_from_slice(&field.to_le_bytes());
    }
    out.extend_from_slice(v.data());
    out
}

pub fn decode_cvol(bytes: &[u8], path: &Path) -> Result<VolumeTensor> {
    let corrupt = |reason: &str| Error::CorruptContainer { path: path.to_owned(), reason: reason.into() };
    if bytes.len() < 4 || &bytes[..4] != CVOL_MAGIC {
        return Err(Error::BadMagic { path: path.to_owned() });
    }
    if bytes.len() < CVOL_HEADER_LEN {
        return Err(corrupt("truncated header"));
    }
    let field = |i: usize| u32::from_le_bytes(bytes[4 + 4 * i..8 + 4 * i].try_into().unwrap());
    let version = field(0);
    if version != CVOL_VERSION {
        return Err(Error::BadVersion { path: path.to_owned(), version });
    }
    let (w, h, d, c) = (field(1) as usize, field(2) as usize, field(3) as usize, field(4));
    if c != 3 {
        return Err(corrupt("channel count must be 3"));
    }
    if d == 0 {
        return Err(Error::EmptyVolume { path: path.to_owned() });
    }
    let expected = w
        .checked_mul(h)
        .and_then(|n| n.checked_mul(d))
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| corrupt("dimensions overflow"))?;
    let payload = &bytes[CVOL_HEADER_LEN..];
    if payload.len() != expected {
        return Err(corrupt(&format!("payload is {} bytes, header implies {expected}", payload.len())));
    }
    Ok(VolumeTensor::new(w, h, d, payload.to_vec())?)
}

/// Reads a `.cvol` file or a PNG frame directory.
pub fn read_volume(path: &Path) -> Result<VolumeTensor> {
    if path.is_dir() {
        return read_frame_dir(path);
    }
    let bytes = fs::read(path).map_err(Error::io(path))?;
    decode_cvol(&bytes, path)
}

pub fn write_volume(v: &VolumeTensor, path: &Path) -> Result<()> {
    fs::write(path, encode_cvol(v)).map_err(Error::io(path))
}

fn frame_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("frame_")?.strip_suffix(".png")?;
    if digits.len() != 5 || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    digits.parse().ok()
}

pub fn frame_path(dir: &Path, index: usize) -> PathBuf {
    dir.join(format!("frame_{index:05}.png"))
}

pub fn read_frame_dir(dir: &Path) -> Result<VolumeTensor> {
    let mut indices = Vec::new();
    for entry in fs::read_dir(dir).map_err(Error::io(dir))? {
        let entry = entry.map_err(Error::io(dir))?;
        if let Some(i) = entry.file_name().to_str().and_then(frame_index) {
            indices.push(i);
        }
    }
    if indices.is_empty() {
        return Err(Error::EmptyVolume { path: dir.to_owned() });
    }
    indices.sort_unstable();
    if let Some(missing) = indices.iter().enumerate().find(|(want, &got)| *want != got).map(|(i, _)| i) {
        return Err(Error::MissingFrames { path: dir.to_owned(), index: missing });
    }

    let mut dims = None;
    let mut data = Vec::new();
    for i in 0..indices.len() {
        let path = frame_path(dir, i);
        let img = image::open(&path).map_err(|e| Error::BadImage { path: path.clone(), reason: e.to_string() })?;
        let DynamicImage::ImageRgb8(rgb) = img else {
            return Err(Error::BadImage { path, reason: "expected 8-bit RGB".into() });
        };
        let found = rgb.dimensions();
        match dims {
            None => dims = Some(found),
            Some(expected) if expected != found => {
                return Err(Error::DimensionMismatch { path, expected, found });
            }
            Some(_) => {}
        }
        data.extend_from_slice(rgb.as_raw());
    }
    let (w, h) = dims.expect("at least one frame");
    Ok(VolumeTensor::new(w as usize, h as usize, indices.len(), data)?)
}

/// Writes one PNG per frame, creating `dir` if needed.
pub fn write_frame_dir(v: &VolumeTensor, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(Error::io(dir))?;
    for z in 0..v.depth() {
        let path = frame_path(dir, z);
        let img = RgbImage::from_raw(v.width() as u32, v.height() as u32, v.frame(z).to_vec())
            .expect("frame length matches dimensions");
        img.save(&path).map_err(|e| Error::BadImage { path: path.clone(), reason: e.to_string() })?;
    }
    Ok(())
}
