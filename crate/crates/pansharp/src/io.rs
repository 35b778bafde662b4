//! Deterministic raster I/O.
//!
//! Images are stored as a JSON header next to a raw payload: band-sequential,
//! row-major, little-endian `f32`. The format is self-describing, bit-exact
//! and diffable, which is what the test harness needs. A binary PGM importer
//! covers common 8/16-bit test chips.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::raster::{MultibandImage, Raster};

/// Maximum payload a reader will allocate for by default: 2 GiB.
pub const DEFAULT_PAYLOAD_CAP: u64 = 2 << 30;

/// JSON header describing a raw raster payload.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct RasterHeader {
    pub width: u32,
    pub height: u32,
    pub bands: u32,
    pub dtype: String,
    pub layout: String,
    pub byte_order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_names: Option<Vec<String>>,
}

impl RasterHeader {
    fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 || self.bands == 0 {
            return Err(Error::InvalidParameter {
                name: "header dimensions",
                reason: format!("{}x{}x{}", self.width, self.height, self.bands),
            });
        }
        if self.dtype != "f32" {
            return Err(Error::UnsupportedHeader {
                field: "dtype",
                value: self.dtype.clone(),
            });
        }
        if self.layout != "band-sequential" {
            return Err(Error::UnsupportedHeader {
                field: "layout",
                value: self.layout.clone(),
            });
        }
        if self.byte_order != "little-endian" {
            return Err(Error::UnsupportedHeader {
                field: "byte_order",
                value: self.byte_order.clone(),
            });
        }
        if let Some(names) = &self.band_names {
            if names.len() != self.bands as usize {
                return Err(Error::LengthMismatch {
                    what: "band_names",
                    expected: self.bands as usize,
                    actual: names.len(),
                });
            }
        }
        Ok(())
    }

    pub fn payload_bytes(&self) -> u64 {
        self.width as u64 * self.height as u64 * self.bands as u64 * 4
    }
}

/// Reads an image, enforcing the given payload cap.
pub fn read_image_capped(
    header_path: &Path,
    data_path: &Path,
    payload_cap: u64,
) -> Result<MultibandImage> {
    let header_text =
        fs::read_to_string(header_path).map_err(|e| Error::io(header_path, e))?;
    let header: RasterHeader = serde_json::from_str(&header_text).map_err(|e| Error::Json {
        path: header_path.to_path_buf(),
        source: e,
    })?;
    header.validate()?;
    let expected = header.payload_bytes();
    if expected > payload_cap {
        return Err(Error::PayloadTooLarge {
            requested: expected,
            cap: payload_cap,
        });
    }

    let meta = fs::metadata(data_path).map_err(|e| Error::io(data_path, e))?;
    if meta.len() != expected {
        return Err(Error::PayloadSize {
            path: data_path.to_path_buf(),
            expected,
            actual: meta.len(),
        });
    }
    let mut bytes = Vec::with_capacity(expected as usize);
    fs::File::open(data_path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(data_path, e))?;
    if bytes.len() as u64 != expected {
        return Err(Error::PayloadSize {
            path: data_path.to_path_buf(),
            expected,
            actual: bytes.len() as u64,
        });
    }

    let (w, h, k) = (
        header.width as usize,
        header.height as usize,
        header.bands as usize,
    );
    let band_len = w * h;
    let mut bands = Vec::with_capacity(k);
    for b in 0..k {
        let start = b * band_len * 4;
        let samples: Vec<f64> = bytes[start..start + band_len * 4]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
            .collect();
        bands.push(Raster::new(w, h, samples)?);
    }
    MultibandImage::new(bands)
}

/// Reads an image with the default 2 GiB payload cap.
pub fn read_image(header_path: &Path, data_path: &Path) -> Result<MultibandImage> {
    read_image_capped(header_path, data_path, DEFAULT_PAYLOAD_CAP)
}

/// Writes the JSON header and the band-sequential little-endian payload.
/// Samples are narrowed to `f32`.
pub fn write_image(
    img: &MultibandImage,
    header_path: &Path,
    data_path: &Path,
    band_names: Option<Vec<String>>,
) -> Result<()> {
    let band_names = band_names.filter(|n| !n.is_empty());
    let header = RasterHeader {
        width: img.width() as u32,
        height: img.height() as u32,
        bands: img.band_count() as u32,
        dtype: "f32".to_string(),
        layout: "band-sequential".to_string(),
        byte_order: "little-endian".to_string(),
        band_names,
    };
    header.validate()?;
    let mut text = serde_json::to_string_pretty(&header).expect("header serializes");
    text.push('\n');
    fs::write(header_path, text).map_err(|e| Error::io(header_path, e))?;

    let mut bytes = Vec::with_capacity(header.payload_bytes() as usize);
    for band in img.bands() {
        for &v in band.samples() {
            bytes.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    fs::write(data_path, bytes).map_err(|e| Error::io(data_path, e))
}

/// Imports a binary (`P5`) PGM file. Values are kept as stored; samples wider
/// than 8 bits are big-endian per the PGM specification.
pub fn import_pgm(path: &Path) -> Result<Raster> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let bad = |reason: &str| Error::InvalidPgm {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };

    if bytes.len() < 2 || &bytes[0..2] != b"P5" {
        return Err(bad("not a binary P5 PGM"));
    }
    let mut pos = 2usize;
    let mut read_token = |bytes: &[u8]| -> Result<u64> {
        // Skip whitespace and '#' comments between header tokens.
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos < bytes.len() && bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                break;
            }
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("malformed header token"));
        }
        std::str::from_utf8(&bytes[start..pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| bad("malformed header token"))
    };

    let width = read_token(&bytes)? as usize;
    let height = read_token(&bytes)? as usize;
    let maxval = read_token(&bytes)?;
    if maxval == 0 || maxval > 65535 {
        return Err(bad(&format!("maxval {maxval} out of range 1..=65535")));
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(bad("missing whitespace after maxval"));
    }
    pos += 1;

    let wide = maxval > 255;
    let sample_bytes = if wide { 2 } else { 1 };
    let expected = width * height * sample_bytes;
    let payload = &bytes[pos..];
    if payload.len() != expected {
        return Err(bad(&format!(
            "payload is {} bytes, expected {expected}",
            payload.len()
        )));
    }
    let samples: Vec<f64> = if wide {
        payload
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]) as f64)
            .collect()
    } else {
        payload.iter().map(|&b| b as f64).collect()
    };
    Raster::new(width, height, samples)
}
