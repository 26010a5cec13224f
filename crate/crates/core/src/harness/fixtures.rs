//! Tiny synthetic test images: gradients, checkerboards, sinusoid textures,
//! and a mixed cartoon/texture scene used for regression PSNRs.

use ndarray::Array2;
use std::f64::consts::PI;

use crate::harness::pgm::Image;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    /// diagonal luminance ramp
    Gradient,
    /// 8-pixel checkerboard
    Checkerboard,
    /// two crossed sinusoids (texture-like)
    Sinusoid,
    /// quadrants: ramp, checker, sinusoid, and a disc on flat background
    Mixed,
}

impl Fixture {
    pub fn name(&self) -> &'static str {
        match self {
            Fixture::Gradient => "gradient",
            Fixture::Checkerboard => "checkerboard",
            Fixture::Sinusoid => "sinusoid",
            Fixture::Mixed => "mixed",
        }
    }
}

pub fn synthetic_image(kind: Fixture, n: usize) -> Image {
    let nf = n as f64;
    let pixels = match kind {
        Fixture::Gradient => Array2::from_shape_fn((n, n), |(i, j)| {
            255.0 * (i + j) as f64 / (2.0 * nf - 2.0)
        }),
        Fixture::Checkerboard => Array2::from_shape_fn((n, n), |(i, j)| {
            if (i / 8 + j / 8) % 2 == 0 {
                48.0
            } else {
                208.0
            }
        }),
        Fixture::Sinusoid => Array2::from_shape_fn((n, n), |(i, j)| {
            let x = i as f64 / nf;
            let y = j as f64 / nf;
            128.0 + 60.0 * (2.0 * PI * 9.0 * x).sin() + 50.0 * (2.0 * PI * 13.0 * (x + y)).cos()
        }),
        Fixture::Mixed => Array2::from_shape_fn((n, n), |(i, j)| {
            let h = n / 2;
            match (i < h, j < h) {
                (true, true) => 255.0 * (i + j) as f64 / (2.0 * h as f64),
                (true, false) => {
                    if (i / 6 + j / 6) % 2 == 0 {
                        64.0
                    } else {
                        192.0
                    }
                }
                (false, true) => {
                    let x = i as f64 / nf;
                    let y = j as f64 / nf;
                    128.0 + 55.0 * (2.0 * PI * 11.0 * (x + 0.5 * y)).sin()
                }
                (false, false) => {
                    let ci = 0.75 * nf;
                    let cj = 0.75 * nf;
                    let r2 = (i as f64 - ci).powi(2) + (j as f64 - cj).powi(2);
                    if r2 < (nf / 6.0).powi(2) {
                        220.0
                    } else {
                        70.0
                    }
                }
            }
        }),
    };
    Image { pixels }
}
