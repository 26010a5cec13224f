//! Coefficient shrinkage rules: soft, hard, bivariate shrinkage with
//! parent/window statistics, and the local-soft variant.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filterbank::BandId;
use crate::transform::{filter_l2_norm, Pyramid, TransformSpec};

/// Complex soft threshold: `c - lambda c/|c|` when `|c| > lambda`, else 0.
pub fn soft(c: Complex64, lambda: f64) -> Complex64 {
    let m = c.norm();
    if m > lambda {
        c - c * (lambda / m)
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Complex hard threshold: `c` when `|c| > lambda`, else 0.
pub fn hard(c: Complex64, lambda: f64) -> Complex64 {
    if c.norm() > lambda {
        c
    } else {
        Complex64::new(0.0, 0.0)
    }
}

/// Scalar soft threshold.
pub fn soft_real(x: f64, lambda: f64) -> f64 {
    if x > lambda {
        x - lambda
    } else if x < -lambda {
        x + lambda
    } else {
        0.0
    }
}

/// Which effective-filter norm feeds `sigma_n = lambda ||b||_2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormMode {
    /// level-dependent effective filter (default)
    LevelDependent,
    /// always the level-1 filter
    LevelOne,
}

/// Per-run shrinkage state: the schedule threshold, the window radius, and
/// the band filter norms per (level, band).
#[derive(Debug, Clone)]
pub struct ShrinkContext {
    pub lambda: f64,
    pub window_radius: usize,
    pub norm_mode: NormMode,
    norms: Vec<Vec<f64>>,
}

impl ShrinkContext {
    /// Precompute `||b||_2` for every detail band at every level.
    pub fn for_spec(spec: &TransformSpec, n: usize, lambda: f64) -> Result<Self> {
        Self::with_options(spec, n, lambda, 3, NormMode::LevelDependent)
    }

    pub fn with_options(
        spec: &TransformSpec,
        n: usize,
        lambda: f64,
        window_radius: usize,
        norm_mode: NormMode,
    ) -> Result<Self> {
        if window_radius < 1 {
            return Err(Error::config("window radius must be >= 1"));
        }
        let mut norms = Vec::with_capacity(spec.levels as usize);
        for level in 1..=spec.levels {
            let mut per_band = Vec::with_capacity(spec.bank.highpass.len());
            for f in &spec.bank.highpass {
                per_band.push(filter_l2_norm(spec, n, level, &f.id)?);
            }
            norms.push(per_band);
        }
        Ok(ShrinkContext {
            lambda,
            window_radius,
            norm_mode,
            norms,
        })
    }

    pub fn with_lambda(&self, lambda: f64) -> Self {
        ShrinkContext {
            lambda,
            ..self.clone()
        }
    }

    fn sigma_n(&self, level0: usize, band_pos: usize) -> f64 {
        let level = match self.norm_mode {
            NormMode::LevelDependent => level0,
            NormMode::LevelOne => 0,
        };
        self.lambda * self.norms[level][band_pos]
    }
}

/// Circular (periodic) mean of `grid` over the `(2r+1)^2` window, computed
/// separably with sliding sums.
fn circular_box_mean(grid: &Array2<f64>, radius: usize) -> Array2<f64> {
    let (rows, cols) = grid.dim();
    let w = 2 * radius + 1;
    // rows pass
    let mut tmp = Array2::zeros((rows, cols));
    for r in 0..rows {
        let mut acc = 0.0;
        for d in -(radius as isize)..=(radius as isize) {
            acc += grid[[r, d.rem_euclid(cols as isize) as usize]];
        }
        tmp[[r, 0]] = acc;
        for c in 1..cols {
            let add = (c + radius) % cols;
            let sub = ((c as isize - 1 - radius as isize).rem_euclid(cols as isize)) as usize;
            acc += grid[[r, add]] - grid[[r, sub]];
            tmp[[r, c]] = acc;
        }
    }
    // cols pass
    let mut out = Array2::zeros((rows, cols));
    for c in 0..cols {
        let mut acc = 0.0;
        for d in -(radius as isize)..=(radius as isize) {
            acc += tmp[[(d.rem_euclid(rows as isize)) as usize, c]];
        }
        out[[0, c]] = acc;
        for r in 1..rows {
            let add = (r + radius) % rows;
            let sub = ((r as isize - 1 - radius as isize).rem_euclid(rows as isize)) as usize;
            acc += tmp[[add, c]] - tmp[[sub, c]];
            out[[r, c]] = acc;
        }
    }
    let scale = 1.0 / (w * w) as f64;
    out.mapv_inplace(|v| v * scale);
    out
}

/// Reference to a parent coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParentRef {
    pub level: u32,
    pub band: BandId,
    pub row: usize,
    pub col: usize,
}

/// Parent of coefficient `(i, j)` of `band` at one-based `level`: the
/// same-orientation band one level coarser at the index scaled to that
/// level's grid (floor halving for the decimated pyramid). `None` at the
/// coarsest detail level.
pub fn parent_of(
    pyr: &Pyramid,
    level: u32,
    band: &BandId,
    i: usize,
    j: usize,
) -> Result<Option<ParentRef>> {
    let this = pyr.band(level, band)?;
    if level as usize >= pyr.levels() {
        return Ok(None);
    }
    let up = pyr.band(level + 1, band)?;
    let (rows, cols) = this.coeffs.dim();
    let (up_rows, up_cols) = up.coeffs.dim();
    if i >= rows || j >= cols {
        return Err(Error::structure(format!(
            "coordinate ({i}, {j}) outside band of shape {rows}x{cols}"
        )));
    }
    Ok(Some(ParentRef {
        level: level + 1,
        band: *band,
        row: i * up_rows / rows,
        col: j * up_cols / cols,
    }))
}

/// Bivariate shrinkage: every detail coefficient `c` is soft-thresholded
/// with `lambda_c = sqrt(3) sigma_n^2 / (sigma_c sqrt(1 + |c_p / c|^2))`
/// where `sigma_n = lambda ||b||_2`, `sigma_c` is the local signal deviation
/// estimated over the window, and `c_p` is the parent coefficient. The
/// low-pass band passes through unchanged.
pub fn bivariate_shrink(pyr: &Pyramid, ctx: &ShrinkContext) -> Pyramid {
    let mut out = pyr.clone();
    let sqrt3 = 3.0_f64.sqrt();
    for lev in 0..pyr.levels() {
        for (pos, band) in pyr.detail[lev].bands.iter().enumerate() {
            let sigma_n = ctx.sigma_n(lev, pos);
            let sq = band.coeffs.mapv(|c| c.norm_sqr());
            let win = circular_box_mean(&sq, ctx.window_radius);
            let parent = pyr.detail.get(lev + 1).map(|l| &l.bands[pos].coeffs);
            let (rows, cols) = band.coeffs.dim();
            let dst = &mut out.detail[lev].bands[pos].coeffs;
            for i in 0..rows {
                for j in 0..cols {
                    let c = band.coeffs[[i, j]];
                    let cm = c.norm();
                    if cm == 0.0 {
                        dst[[i, j]] = Complex64::new(0.0, 0.0);
                        continue;
                    }
                    let var = win[[i, j]] - sigma_n * sigma_n;
                    if var <= 0.0 {
                        dst[[i, j]] = Complex64::new(0.0, 0.0);
                        continue;
                    }
                    let sigma_c = var.sqrt();
                    let cp = match parent {
                        Some(p) => {
                            let (pr, pc) = p.dim();
                            p[[i * pr / rows, j * pc / cols]].norm()
                        }
                        None => 0.0,
                    };
                    // sqrt(1 + |cp/c|^2) = sqrt(|c|^2 + |cp|^2) / |c|
                    let lambda_c = sqrt3 * sigma_n * sigma_n * cm
                        / (sigma_c * (cm * cm + cp * cp).sqrt());
                    dst[[i, j]] = soft(c, lambda_c);
                }
            }
        }
    }
    out
}

/// The local-soft baseline: `lambda_c = sqrt(2) sigma_n^2 / sigma_c` with
/// `sigma_n = sigma / 7`, window `[-4, 4]^2`, and
/// `sigma_c = max(sqrt(max(mean(sqrt(2)|c_j|)^2 - sigma_n^2, 0)), 1e-3)`.
pub fn local_soft_shrink(pyr: &Pyramid, sigma: f64) -> Pyramid {
    let mut out = pyr.clone();
    let sigma_n = sigma / 7.0;
    let sqrt2 = 2.0_f64.sqrt();
    for lev in 0..pyr.levels() {
        for (pos, band) in pyr.detail[lev].bands.iter().enumerate() {
            let abs = band.coeffs.mapv(|c| sqrt2 * c.norm());
            let win = circular_box_mean(&abs, 4);
            let (rows, cols) = band.coeffs.dim();
            let dst = &mut out.detail[lev].bands[pos].coeffs;
            for i in 0..rows {
                for j in 0..cols {
                    let mean = win[[i, j]];
                    let sigma_c = (mean * mean - sigma_n * sigma_n).max(0.0).sqrt().max(1e-3);
                    let lambda_c = sqrt2 * sigma_n * sigma_n / sigma_c;
                    dst[[i, j]] = soft(band.coeffs[[i, j]], lambda_c);
                }
            }
        }
    }
    out
}
