//! Restoration quality metrics.

use crate::error::{Error, Result};
use crate::harness::pgm::Image;
use ndarray::Array2;

/// Peak signal-to-noise ratio `10 log10(255^2 d / ||x - y||_2^2)` in dB;
/// identical inputs report `+inf`.
pub fn psnr_grids(x: &Array2<f64>, y: &Array2<f64>) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::structure(format!(
            "psnr shapes differ: {:?} vs {:?}",
            x.dim(),
            y.dim()
        )));
    }
    let sse: f64 = x
        .iter()
        .zip(y.iter())
        .map(|(a, b)| (a - b) * (a - b))
        .sum();
    if sse == 0.0 {
        return Ok(f64::INFINITY);
    }
    let d = x.len() as f64;
    Ok(10.0 * (255.0 * 255.0 * d / sse).log10())
}

pub fn psnr(reference: &Image, test: &Image) -> Result<f64> {
    psnr_grids(&reference.pixels, &test.pixels)
}
