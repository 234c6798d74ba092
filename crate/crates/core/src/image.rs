//! Image and mask value types, plus 8-bit PGM I/O.
//!
//! Pixels are `f64` end to end. Quantization to bytes happens only when an
//! image is written out.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Real-valued grayscale image, row-major.
///
/// Values nominally lie in `0..=255` but intermediate results may leave that
/// range. Every pixel is finite.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    rows: usize,
    cols: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(rows: usize, cols: usize, pixels: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidImage(format!("empty dimensions {rows}x{cols}")));
        }
        if pixels.len() != rows * cols {
            return Err(Error::InvalidImage(format!(
                "{rows}x{cols} image needs {} pixels, got {}",
                rows * cols,
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidImage(format!("non-finite pixel at index {i}")));
        }
        Ok(Self { rows, cols, pixels })
    }

    pub fn filled(rows: usize, cols: usize, value: f64) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut pixels = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                pixels.push(f(r, c));
            }
        }
        Self::new(rows, cols, pixels)
    }

    /// Builds an image from values the caller already knows are finite and
    /// correctly sized.
    pub(crate) fn from_parts(rows: usize, cols: usize, pixels: Vec<f64>) -> Self {
        debug_assert_eq!(pixels.len(), rows * cols);
        debug_assert!(pixels.iter().all(|p| p.is_finite()));
        Self { rows, cols, pixels }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<f64> {
        self.pixels
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.cols + col]
    }

    /// Pixels as bytes: round half away from zero, then clamp to `0..=255`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.pixels.iter().map(|&p| quantize(p)).collect()
    }

    pub fn from_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(rows, cols, bytes.iter().map(|&b| f64::from(b)).collect())
    }

    pub(crate) fn check_dims(&self, rows: usize, cols: usize) -> Result<()> {
        if (self.rows, self.cols) != (rows, cols) {
            return Err(Error::dims((rows, cols), (self.rows, self.cols)));
        }
        Ok(())
    }
}

fn quantize(p: f64) -> u8 {
    // f64::round is half-away-from-zero.
    p.round().clamp(0.0, 255.0) as u8
}

/// Binary loss mask: `true` marks a known pixel, `false` a missing one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mask {
    rows: usize,
    cols: usize,
    bits: Vec<bool>,
}

impl Mask {
    pub fn new(rows: usize, cols: usize, bits: Vec<bool>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidImage(format!(
                "empty mask dimensions {rows}x{cols}"
            )));
        }
        if bits.len() != rows * cols {
            return Err(Error::InvalidImage(format!(
                "{rows}x{cols} mask needs {} entries, got {}",
                rows * cols,
                bits.len()
            )));
        }
        Ok(Self { rows, cols, bits })
    }

    pub fn all_known(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![true; rows * cols])
    }

    pub fn all_missing(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![false; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn is_known(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.cols + col]
    }

    pub fn known_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn missing_count(&self) -> usize {
        self.bits.len() - self.known_count()
    }

    /// The mask as a 0/1 image, handy for filtering.
    pub fn to_image(&self) -> Image {
        Image::from_parts(
            self.rows,
            self.cols,
            self.bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect(),
        )
    }

    pub(crate) fn check_dims(&self, rows: usize, cols: usize) -> Result<()> {
        if (self.rows, self.cols) != (rows, cols) {
            return Err(Error::dims((rows, cols), (self.rows, self.cols)));
        }
        Ok(())
    }
}

/// Pixel-wise product `x·M`: known pixels kept, missing pixels zeroed.
pub fn apply_mask(image: &Image, mask: &Mask) -> Result<Image> {
    mask.check_dims(image.rows, image.cols)?;
    let pixels = image
        .pixels
        .iter()
        .zip(&mask.bits)
        .map(|(&p, &known)| if known { p } else { 0.0 })
        .collect();
    Ok(Image::from_parts(image.rows, image.cols, pixels))
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<Image> {
    decode_pgm(&fs::read(path)?)
}

/// Writes a binary (P5) PGM.
pub fn write_pgm(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_pgm(image))?;
    Ok(())
}

/// Reads a mask stored as PGM: 0 is missing, anything else is known.
pub fn read_mask(path: impl AsRef<Path>) -> Result<Mask> {
    let image = read_pgm(path)?;
    let bits = image.pixels.iter().map(|&p| p != 0.0).collect();
    Mask::new(image.rows, image.cols, bits)
}

/// Writes a mask as P5 PGM with 255 for known and 0 for missing pixels.
pub fn write_mask(mask: &Mask, path: impl AsRef<Path>) -> Result<()> {
    let bytes: Vec<u8> = mask.bits.iter().map(|&b| if b { 255 } else { 0 }).collect();
    fs::write(path, encode_pgm_bytes(mask.rows, mask.cols, &bytes))?;
    Ok(())
}

pub fn encode_pgm(image: &Image) -> Vec<u8> {
    encode_pgm_bytes(image.rows, image.cols, &image.to_bytes())
}

fn encode_pgm_bytes(rows: usize, cols: usize, bytes: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    out.extend_from_slice(bytes);
    out
}

/// Parses a P5 or P2 PGM with maxval 255.
pub fn decode_pgm(data: &[u8]) -> Result<Image> {
    let mut cursor = Cursor { data, pos: 0 };
    let binary = match data.get(..2) {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return Err(Error::Pgm("expected magic P5 or P2".into())),
    };
    cursor.pos = 2;
    let cols = cursor.header_number("width")?;
    let rows = cursor.header_number("height")?;
    let maxval = cursor.header_number("maxval")?;
    if maxval != 255 {
        return Err(Error::Pgm(format!(
            "unsupported maxval {maxval}, only 255 is accepted"
        )));
    }
    if rows == 0 || cols == 0 {
        return Err(Error::Pgm(format!("empty dimensions {cols}x{rows}")));
    }
    let count = rows
        .checked_mul(cols)
        .ok_or_else(|| Error::Pgm("dimensions overflow".into()))?;

    if binary {
        // Exactly one whitespace byte separates the header from the raster.
        match cursor.data.get(cursor.pos) {
            Some(b) if b.is_ascii_whitespace() => cursor.pos += 1,
            _ => return Err(Error::Pgm("missing whitespace after maxval".into())),
        }
        let raster = cursor
            .data
            .get(cursor.pos..)
            .filter(|r| r.len() >= count)
            .ok_or_else(|| Error::Pgm(format!("raster truncated, expected {count} bytes")))?;
        Image::from_bytes(rows, cols, &raster[..count])
    } else {
        let mut pixels = Vec::with_capacity(count);
        for _ in 0..count {
            let v = cursor.header_number("pixel")?;
            if v > 255 {
                return Err(Error::Pgm(format!("pixel value {v} exceeds maxval")));
            }
            pixels.push(v as f64);
        }
        Image::new(rows, cols, pixels)
    }
}

struct Cursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_separators(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    fn header_number(&mut self, what: &str) -> Result<usize> {
        self.skip_separators();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Pgm(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pgm(format!("{what} out of range")))
    }
}
