//! Minimal PGM reader/writer: binary P5 and ASCII P2, maxval 255.
//!
//! Masks are PGM too: pixels >= 128 are observed, anything below is missing.

use std::fs;
use std::io::Write;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::inpaint::Mask;

/// A greyscale image in nominal `[0, 255]` units (not enforced internally).
#[derive(Debug, Clone)]
pub struct Image {
    pub pixels: Array2<f64>,
}

impl Image {
    pub fn new(pixels: Array2<f64>) -> Result<Self> {
        if pixels.iter().any(|v| !v.is_finite()) {
            return Err(Error::structure("image contains non-finite values"));
        }
        Ok(Image { pixels })
    }

    pub fn width(&self) -> usize {
        self.pixels.ncols()
    }

    pub fn height(&self) -> usize {
        self.pixels.nrows()
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn read_uint(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(Error::parse(start, format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(start, format!("invalid {what}")))
    }
}

/// Load a P5 (binary) or P2 (ASCII) PGM with maxval 255.
pub fn load_pgm(path: impl AsRef<Path>) -> Result<Image> {
    let bytes = fs::read(path)?;
    parse_pgm(&bytes)
}

pub(crate) fn parse_pgm(bytes: &[u8]) -> Result<Image> {
    if bytes.len() < 2 {
        return Err(Error::parse(0, "file too short for a PGM header"));
    }
    let binary = match &bytes[0..2] {
        b"P5" => true,
        b"P2" => false,
        _ => return Err(Error::parse(0, "missing P5/P2 magic")),
    };
    let mut cur = Cursor { bytes, pos: 2 };
    let width = cur.read_uint("width")? as usize;
    let height = cur.read_uint("height")? as usize;
    let maxval_at = {
        cur.skip_whitespace_and_comments();
        cur.pos
    };
    let maxval = cur.read_uint("maxval")?;
    if maxval != 255 {
        return Err(Error::parse(
            maxval_at,
            format!("maxval must be 255, got {maxval}"),
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::parse(2, "zero image dimension"));
    }
    let mut pixels = Array2::zeros((height, width));
    if binary {
        // exactly one whitespace byte separates the header from the raster
        if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
            return Err(Error::parse(cur.pos, "expected whitespace before raster"));
        }
        cur.pos += 1;
        let need = width * height;
        if bytes.len() - cur.pos < need {
            return Err(Error::parse(
                bytes.len(),
                format!(
                    "raster truncated: need {need} bytes, have {}",
                    bytes.len() - cur.pos
                ),
            ));
        }
        for (k, &b) in bytes[cur.pos..cur.pos + need].iter().enumerate() {
            pixels[[k / width, k % width]] = b as f64;
        }
    } else {
        for k in 0..width * height {
            let at = cur.pos;
            let v = cur
                .read_uint("pixel value")
                .map_err(|_| Error::parse(at, format!("raster truncated at pixel {k}")))?;
            if v > 255 {
                return Err(Error::parse(at, format!("pixel value {v} exceeds 255")));
            }
            pixels[[k / width, k % width]] = v as f64;
        }
    }
    Image::new(pixels)
}

/// Clamp to `[0, 255]`, round half away from zero.
pub fn quantize(v: f64) -> u8 {
    (v.clamp(0.0, 255.0) + 0.5).floor() as u8
}

/// Save as binary P5, clamping and rounding each pixel.
pub fn save_pgm(image: &Image, path: impl AsRef<Path>) -> Result<()> {
    let mut out = Vec::with_capacity(image.pixels.len() + 32);
    write!(out, "P5\n{} {}\n255\n", image.width(), image.height())?;
    for &v in image.pixels.iter() {
        out.push(quantize(v));
    }
    fs::write(path, out)?;
    Ok(())
}

/// Load a mask from PGM: values >= 128 are observed.
pub fn load_mask_pgm(path: impl AsRef<Path>) -> Result<Mask> {
    let image = load_pgm(path)?;
    Mask::new(image.pixels.mapv(|v| v >= 128.0))
}

/// Save a mask as P5: 255 = observed, 0 = missing.
pub fn save_mask_pgm(mask: &Mask, path: impl AsRef<Path>) -> Result<()> {
    let pixels = mask.observed().mapv(|o| if o { 255.0 } else { 0.0 });
    save_pgm(&Image { pixels }, path)
}
