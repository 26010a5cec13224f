//! Tap-defined filters: spline tight framelets and the orthonormal-DCT bank.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A finitely supported real filter; `offset` is the index of the first tap.
#[derive(Debug, Clone, PartialEq)]
pub struct TapFilter {
    pub taps: Vec<f64>,
    pub offset: i64,
}

impl TapFilter {
    pub fn new(taps: Vec<f64>, offset: i64) -> Self {
        TapFilter { taps, offset }
    }

    /// Fourier series `sum_k taps[k] e^{-i k xi}`.
    pub fn response(&self, xi: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &t) in self.taps.iter().enumerate() {
            let k = self.offset + j as i64;
            let phase = -(k as f64) * xi;
            acc += Complex64::new(phase.cos(), phase.sin()) * t;
        }
        acc
    }
}

/// Spline tight framelet variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplineVariant {
    /// `{a; b1..b4}` with supports `[-2, 2]`
    Cubic,
    /// `{a; b1, b2}` with supports `[-1, 1]`
    Linear,
}

/// 1D spline tight framelet filters, low-pass first.
pub fn spline_filters(variant: SplineVariant) -> Vec<TapFilter> {
    match variant {
        SplineVariant::Cubic => {
            let s6 = 6.0_f64.sqrt();
            vec![
                TapFilter::new([1.0, 4.0, 6.0, 4.0, 1.0].iter().map(|v| v / 16.0).collect(), -2),
                TapFilter::new([1.0, 2.0, 0.0, -2.0, -1.0].iter().map(|v| v / 8.0).collect(), -2),
                TapFilter::new(
                    [-1.0, 0.0, 2.0, 0.0, -1.0].iter().map(|v| v * s6 / 16.0).collect(),
                    -2,
                ),
                TapFilter::new([-1.0, 2.0, 0.0, -2.0, 1.0].iter().map(|v| v / 8.0).collect(), -2),
                TapFilter::new([1.0, -4.0, 6.0, -4.0, 1.0].iter().map(|v| v / 16.0).collect(), -2),
            ]
        }
        SplineVariant::Linear => {
            let s2 = 2.0_f64.sqrt();
            vec![
                TapFilter::new(vec![0.25, 0.5, 0.25], -1),
                TapFilter::new(vec![-s2 / 4.0, 0.0, s2 / 4.0], -1),
                TapFilter::new(vec![-0.25, 0.5, -0.25], -1),
            ]
        }
    }
}

/// The orthonormal DCT matrix of block size `m`:
/// `B[k, j] = eps_j / sqrt(m) * cos((j-1)(2k-1) pi / (2m))` with
/// `eps_1 = 1`, `eps_j = sqrt(2)` otherwise (`k`, `j` one-based).
pub fn dct_matrix(m: u32) -> Result<Array2<f64>> {
    if m < 2 {
        return Err(Error::config("dct bank requires block size m >= 2"));
    }
    let mf = m as f64;
    Ok(Array2::from_shape_fn((m as usize, m as usize), |(k, j)| {
        let eps = if j == 0 { 1.0 } else { 2.0_f64.sqrt() };
        eps / mf.sqrt() * ((j as f64) * (2.0 * k as f64 + 1.0) * PI / (2.0 * mf)).cos()
    }))
}

/// Columns of `B / sqrt(m)` as filters supported on `[1, m]`.
pub fn dct_filters(m: u32) -> Result<Vec<TapFilter>> {
    let b = dct_matrix(m)?;
    let scale = 1.0 / (m as f64).sqrt();
    Ok((0..m as usize)
        .map(|j| TapFilter::new(b.column(j).iter().map(|v| v * scale).collect(), 1))
        .collect())
}
