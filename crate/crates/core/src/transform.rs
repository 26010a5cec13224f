//! Multilevel 2D tight framelet transforms.
//!
//! The decimated transform works per level in the frequency domain: multiply
//! the spectrum by the conjugate sampled response, fold the spectrum by two
//! in each dimension with factor 1/4, and inverse-DFT; the extra factor 2
//! per level makes the whole analysis operator an isometry. The undecimated
//! transform is the stationary (a trous) variant with responses dilated by
//! `2^(level-1)` and no downsampling.

use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::{fft2, ifft2, to_complex};
use crate::filterbank::{
    build_ctf_bank, build_tpctf_2d, sample_bank, sampled::freq_grid, sampled::SampledFilter,
    tpctf6_bank, BandId, BankKind, CtfParams, FilterBank2d,
};

/// Decimated (dyadic) or stationary transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformMode {
    Decimated,
    Undecimated,
}

/// Everything needed to run a transform: the bank, depth, and mode.
#[derive(Debug, Clone)]
pub struct TransformSpec {
    pub bank: FilterBank2d,
    pub levels: u32,
    pub mode: TransformMode,
}

impl TransformSpec {
    /// Decimated transform over the default directional bank.
    pub fn tpctf6(levels: u32) -> Self {
        TransformSpec {
            bank: tpctf6_bank(),
            levels,
            mode: TransformMode::Decimated,
        }
    }

    /// Decimated transform over a directional bank with explicit parameters.
    pub fn tpctf(params: CtfParams, levels: u32) -> Result<Self> {
        Ok(TransformSpec {
            bank: build_tpctf_2d(&build_ctf_bank(params)?),
            levels,
            mode: TransformMode::Decimated,
        })
    }

    /// Stationary transform over a tap-defined bank.
    pub fn undecimated(bank: FilterBank2d, levels: u32) -> Result<Self> {
        if !bank.is_tap_bank() {
            return Err(Error::config(
                "undecimated transform requires a tap-defined bank",
            ));
        }
        Ok(TransformSpec {
            bank,
            levels,
            mode: TransformMode::Undecimated,
        })
    }

    /// Default decomposition depth: 4 for 256 px and larger, 3 for smaller,
    /// capped so the coarsest decimated grid keeps at least 8 samples.
    pub fn default_levels(n: usize) -> u32 {
        let preferred: u32 = if n >= 256 { 4 } else { 3 };
        preferred.min(Self::max_levels(n))
    }

    /// Largest decimated depth an `n x n` image supports.
    pub fn max_levels(n: usize) -> u32 {
        let mut l = 0u32;
        let mut m = n;
        while m.is_multiple_of(2) && m / 2 >= 8 {
            m /= 2;
            l += 1;
        }
        l
    }

    fn min_grid(&self) -> usize {
        if self.bank.kind == BankKind::Tpctf {
            8
        } else {
            4
        }
    }

    /// Check that an `rows x cols` image is transformable under this spec.
    pub fn validate_for(&self, rows: usize, cols: usize) -> Result<()> {
        if rows != cols {
            return Err(Error::config(format!(
                "image must be square, got {rows}x{cols}"
            )));
        }
        if self.levels == 0 {
            return Err(Error::config("levels must be >= 1"));
        }
        match self.mode {
            TransformMode::Decimated => {
                let div = 1usize << self.levels;
                if !rows.is_multiple_of(div) {
                    return Err(Error::config(format!(
                        "image side {rows} not divisible by 2^{}",
                        self.levels
                    )));
                }
                if rows / div < self.min_grid() {
                    return Err(Error::config(format!(
                        "image side {rows} too small for {} levels (coarsest grid must keep \
                         at least {} samples)",
                        self.levels,
                        self.min_grid()
                    )));
                }
            }
            TransformMode::Undecimated => {
                if !self.bank.is_tap_bank() {
                    return Err(Error::config(
                        "undecimated transform requires a tap-defined bank",
                    ));
                }
                if rows < 2 {
                    return Err(Error::config("image too small"));
                }
            }
        }
        Ok(())
    }
}

/// One detail band of coefficients.
#[derive(Debug, Clone)]
pub struct Band {
    pub id: BandId,
    pub coeffs: Array2<Complex64>,
}

/// All detail bands of one decomposition level.
#[derive(Debug, Clone)]
pub struct Level {
    pub bands: Vec<Band>,
}

/// Coefficients of a multilevel transform. `detail[0]` is the finest level
/// (level 1); `lowpass` is the coarsest approximation.
#[derive(Debug, Clone)]
pub struct Pyramid {
    pub n: usize,
    pub mode: TransformMode,
    pub kind: BankKind,
    pub detail: Vec<Level>,
    pub lowpass: Array2<Complex64>,
}

impl Pyramid {
    pub fn levels(&self) -> usize {
        self.detail.len()
    }

    /// Sum of squared moduli over every coefficient, low-pass included.
    pub fn energy(&self) -> f64 {
        let mut e: f64 = self.lowpass.iter().map(|c| c.norm_sqr()).sum();
        for level in &self.detail {
            for band in &level.bands {
                e += band.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>();
            }
        }
        e
    }

    /// Detail band lookup; `level` is one-based (1 = finest).
    pub fn band(&self, level: u32, id: &BandId) -> Result<&Band> {
        let lvl = self
            .detail
            .get(level as usize - 1)
            .ok_or_else(|| Error::structure(format!("no level {level} in pyramid")))?;
        lvl.bands
            .iter()
            .find(|b| b.id == *id)
            .ok_or_else(|| Error::structure(format!("unknown band {id} at level {level}")))
    }

    /// Real degrees of freedom after conjugate-pair reduction: a band whose
    /// conjugate partner is a distinct band in the same level is counted
    /// once (both real parts kept); self-paired bands carry real
    /// coefficients and count one real number per entry, as does the
    /// low-pass.
    pub fn real_dof_after_conjugate_reduction(&self) -> usize {
        let mut dof = 0usize;
        for level in &self.detail {
            for band in &level.bands {
                let partner = band.id.partner();
                let entries = band.coeffs.len();
                if partner == band.id {
                    dof += entries;
                } else {
                    // count the pair once, at the lexicographically smaller id
                    if band.id < partner {
                        dof += 2 * entries;
                    }
                }
            }
        }
        dof + self.lowpass.len()
    }

    /// Text dump: header (n, levels, bank tag), then per band its id, shape,
    /// and row-major complex values; the low-pass band is listed last.
    pub fn dump(&self) -> String {
        let mut out = format!("pyramid n={} levels={} bank={}\n", self.n, self.levels(), self.kind);
        for (li, level) in self.detail.iter().enumerate() {
            for band in &level.bands {
                out.push_str(&format!(
                    "level {} band {} shape {}x{}\n",
                    li + 1,
                    band.id,
                    band.coeffs.nrows(),
                    band.coeffs.ncols()
                ));
                for c in band.coeffs.iter() {
                    out.push_str(&format!("{:.12e} {:.12e}\n", c.re, c.im));
                }
            }
        }
        out.push_str(&format!(
            "lowpass shape {}x{}\n",
            self.lowpass.nrows(),
            self.lowpass.ncols()
        ));
        for c in self.lowpass.iter() {
            out.push_str(&format!("{:.12e} {:.12e}\n", c.re, c.im));
        }
        out
    }
}

fn sample_all(bank: &FilterBank2d, n: usize) -> Result<Vec<SampledFilter>> {
    Ok(sample_bank(bank, n, 0)?.filters)
}

/// `out[p, q] = 0.5 * sum_e conj(F)[p + e1 m, q + e2 m] X[p + e1 m, q + e2 m]`
fn analyze_band(spectrum: &Array2<Complex64>, filter: &SampledFilter) -> Array2<Complex64> {
    let n = spectrum.nrows();
    let m = n / 2;
    let mut out = Array2::zeros((m, m));
    for p in 0..m {
        for q in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j1 in [p, p + m] {
                for j2 in [q, q + m] {
                    acc += filter.at(j1, j2).conj() * spectrum[[j1, j2]];
                }
            }
            out[[p, q]] = 0.5 * acc;
        }
    }
    out
}

/// `spectrum[j1, j2] += 2 F[j1, j2] C[j1 mod m, j2 mod m]`
fn synthesize_band(
    spectrum: &mut Array2<Complex64>,
    coeff_hat: &Array2<Complex64>,
    filter: &SampledFilter,
) {
    let n = spectrum.nrows();
    let m = coeff_hat.nrows();
    for j1 in 0..n {
        for j2 in 0..n {
            spectrum[[j1, j2]] += 2.0 * filter.at(j1, j2) * coeff_hat[[j1 % m, j2 % m]];
        }
    }
}

fn forward_decimated(image: ArrayView2<f64>, spec: &TransformSpec) -> Result<Pyramid> {
    let n = image.nrows();
    let mut lowpass = to_complex(&image);
    let mut detail = Vec::with_capacity(spec.levels as usize);
    for _ in 0..spec.levels {
        let size = lowpass.nrows();
        let filters = sample_all(&spec.bank, size)?;
        let mut spectrum = lowpass;
        fft2(&mut spectrum);
        let mut bands = Vec::with_capacity(spec.bank.highpass.len());
        for (f2d, sf) in spec.bank.highpass.iter().zip(filters.iter().skip(1)) {
            let mut c = analyze_band(&spectrum, sf);
            ifft2(&mut c);
            bands.push(Band {
                id: f2d.id,
                coeffs: c,
            });
        }
        let mut low = analyze_band(&spectrum, &filters[0]);
        ifft2(&mut low);
        lowpass = low;
        detail.push(Level { bands });
    }
    Ok(Pyramid {
        n,
        mode: TransformMode::Decimated,
        kind: spec.bank.kind,
        detail,
        lowpass,
    })
}

fn check_bands_match(pyr: &Pyramid, spec: &TransformSpec) -> Result<()> {
    for (li, level) in pyr.detail.iter().enumerate() {
        if level.bands.len() != spec.bank.highpass.len() {
            return Err(Error::structure(format!(
                "level {} has {} bands, bank has {}",
                li + 1,
                level.bands.len(),
                spec.bank.highpass.len()
            )));
        }
        for (band, f2d) in level.bands.iter().zip(spec.bank.highpass.iter()) {
            if band.id != f2d.id {
                return Err(Error::structure(format!(
                    "band order mismatch at level {}: {} vs {}",
                    li + 1,
                    band.id,
                    f2d.id
                )));
            }
        }
    }
    Ok(())
}

fn inverse_decimated(pyr: &Pyramid, spec: &TransformSpec) -> Result<Array2<Complex64>> {
    check_bands_match(pyr, spec)?;
    let mut low = pyr.lowpass.clone();
    for level in pyr.detail.iter().rev() {
        let m = low.nrows();
        let size = 2 * m;
        let filters = sample_all(&spec.bank, size)?;
        let mut spectrum = Array2::zeros((size, size));
        fft2(&mut low);
        synthesize_band(&mut spectrum, &low, &filters[0]);
        for (band, sf) in level.bands.iter().zip(filters.iter().skip(1)) {
            if band.coeffs.nrows() != m || band.coeffs.ncols() != m {
                return Err(Error::structure(format!(
                    "band {} has shape {}x{}, expected {m}x{m}",
                    band.id,
                    band.coeffs.nrows(),
                    band.coeffs.ncols()
                )));
            }
            let mut chat = band.coeffs.clone();
            fft2(&mut chat);
            synthesize_band(&mut spectrum, &chat, sf);
        }
        ifft2(&mut spectrum);
        low = spectrum;
    }
    Ok(low)
}

/// Sample every filter at dilated frequencies `2^(level-1) xi`.
fn sample_dilated(bank: &FilterBank2d, n: usize, level: u32) -> Vec<SampledFilter> {
    let grid = freq_grid(n);
    let d = (1u64 << (level - 1)) as f64;
    bank.filters()
        .map(|f| SampledFilter {
            id: f.id,
            row: grid.iter().map(|&xi| f.row.response(d * xi)).collect(),
            col: grid.iter().map(|&xi| f.col.response(d * xi)).collect(),
        })
        .collect()
}

fn forward_undecimated(image: ArrayView2<f64>, spec: &TransformSpec) -> Result<Pyramid> {
    let n = image.nrows();
    let mut spectrum = to_complex(&image);
    fft2(&mut spectrum);
    let mut detail = Vec::with_capacity(spec.levels as usize);
    for level in 1..=spec.levels {
        let filters = sample_dilated(&spec.bank, n, level);
        let mut bands = Vec::with_capacity(spec.bank.highpass.len());
        for (f2d, sf) in spec.bank.highpass.iter().zip(filters.iter().skip(1)) {
            let mut c = Array2::zeros((n, n));
            for j1 in 0..n {
                for j2 in 0..n {
                    c[[j1, j2]] = sf.at(j1, j2).conj() * spectrum[[j1, j2]];
                }
            }
            ifft2(&mut c);
            bands.push(Band {
                id: f2d.id,
                coeffs: c,
            });
        }
        let lp = &filters[0];
        for j1 in 0..n {
            for j2 in 0..n {
                spectrum[[j1, j2]] *= lp.at(j1, j2).conj();
            }
        }
        detail.push(Level { bands });
    }
    ifft2(&mut spectrum);
    Ok(Pyramid {
        n,
        mode: TransformMode::Undecimated,
        kind: spec.bank.kind,
        detail,
        lowpass: spectrum,
    })
}

fn inverse_undecimated(pyr: &Pyramid, spec: &TransformSpec) -> Result<Array2<Complex64>> {
    check_bands_match(pyr, spec)?;
    let n = pyr.n;
    let mut spectrum = pyr.lowpass.clone();
    fft2(&mut spectrum);
    for (li, level) in pyr.detail.iter().enumerate().rev() {
        let filters = sample_dilated(&spec.bank, n, li as u32 + 1);
        let lp = &filters[0];
        for j1 in 0..n {
            for j2 in 0..n {
                spectrum[[j1, j2]] *= lp.at(j1, j2);
            }
        }
        for (band, sf) in level.bands.iter().zip(filters.iter().skip(1)) {
            let mut chat = band.coeffs.clone();
            fft2(&mut chat);
            for j1 in 0..n {
                for j2 in 0..n {
                    spectrum[[j1, j2]] += sf.at(j1, j2) * chat[[j1, j2]];
                }
            }
        }
    }
    ifft2(&mut spectrum);
    Ok(spectrum)
}

/// Analyze a real image into its coefficient pyramid.
pub fn forward(image: &Array2<f64>, spec: &TransformSpec) -> Result<Pyramid> {
    spec.validate_for(image.nrows(), image.ncols())?;
    match spec.mode {
        TransformMode::Decimated => forward_decimated(image.view(), spec),
        TransformMode::Undecimated => forward_undecimated(image.view(), spec),
    }
}

/// Full complex synthesis of a pyramid. For pyramids produced from real
/// images the imaginary part is a numerical zero; for hand-built pyramids
/// (single-band impulses) it carries the imaginary half of the frame
/// element.
pub fn synthesize_complex(pyr: &Pyramid, spec: &TransformSpec) -> Result<Array2<Complex64>> {
    match pyr.mode {
        TransformMode::Decimated => inverse_decimated(pyr, spec),
        TransformMode::Undecimated => inverse_undecimated(pyr, spec),
    }
}

/// Synthesize a real image back from a pyramid; the imaginary residue of
/// the complex synthesis is discarded (taking the real part is exactly the
/// adjoint of the real-to-complex analysis).
pub fn inverse(pyr: &Pyramid, spec: &TransformSpec) -> Result<Array2<f64>> {
    Ok(synthesize_complex(pyr, spec)?.mapv(|c| c.re))
}

/// l2 norm of the effective filter generating `band` at `level` (one-based)
/// for an `n x n` image: by Parseval, the per-dimension sum of the squared
/// dilated response times the accumulated low-pass cascade, times the
/// level's isometric scaling (absent for the stationary transform).
pub fn filter_l2_norm(spec: &TransformSpec, n: usize, level: u32, band: &BandId) -> Result<f64> {
    spec.validate_for(n, n)?;
    if level == 0 || level > spec.levels {
        return Err(Error::structure(format!(
            "level {level} out of range 1..={}",
            spec.levels
        )));
    }
    let f2d = crate::filterbank::find_band(&spec.bank, band)?;
    let grid = freq_grid(n);
    let mut s_row = 0.0;
    let mut s_col = 0.0;
    for &xi in &grid {
        let mut e_row = f2d.row.response((1u64 << (level - 1)) as f64 * xi).norm_sqr();
        let mut e_col = f2d.col.response((1u64 << (level - 1)) as f64 * xi).norm_sqr();
        for t in 1..level {
            let d = (1u64 << (t - 1)) as f64;
            e_row *= spec.bank.lowpass.row.response(d * xi).norm_sqr();
            e_col *= spec.bank.lowpass.col.response(d * xi).norm_sqr();
        }
        s_row += e_row;
        s_col += e_col;
    }
    let scale = match spec.mode {
        // the isometric analysis carries sqrt(2) per level and dimension,
        // so the synthesis gain squares to 4^level
        TransformMode::Decimated => (1u64 << (2 * level)) as f64,
        TransformMode::Undecimated => 1.0,
    };
    Ok((scale * s_row / n as f64 * s_col / n as f64).sqrt())
}

/// Number of real coefficient degrees of freedom of a transform (both real
/// and imaginary parts of every band, low-pass included).
pub fn real_coeff_len(spec: &TransformSpec, n: usize) -> Result<usize> {
    spec.validate_for(n, n)?;
    let bands = spec.bank.highpass.len();
    let mut len = 0usize;
    let mut m = n;
    for _ in 0..spec.levels {
        if spec.mode == TransformMode::Decimated {
            m /= 2;
        }
        len += 2 * bands * m * m;
    }
    Ok(len + 2 * m * m)
}

fn flatten_real(pyr: &Pyramid, out: &mut Vec<f64>) {
    out.clear();
    for level in &pyr.detail {
        for band in &level.bands {
            for c in band.coeffs.iter() {
                out.push(c.re);
                out.push(c.im);
            }
        }
    }
    for c in pyr.lowpass.iter() {
        out.push(c.re);
        out.push(c.im);
    }
}

/// Assemble the explicit real analysis matrix `A` (coefficient dof x d) by
/// transforming every image impulse; the synthesis matrix of the induced
/// real tight frame is its transpose, so `A' A = D D' ~ I`.
pub fn real_analysis_matrix(spec: &TransformSpec, n: usize) -> Result<Array2<f64>> {
    let rows = real_coeff_len(spec, n)?;
    let mut a = Array2::zeros((rows, n * n));
    let mut image = Array2::zeros((n, n));
    let mut flat = Vec::with_capacity(rows);
    for p in 0..n * n {
        image[[p / n, p % n]] = 1.0;
        let pyr = forward(&image, spec)?;
        image[[p / n, p % n]] = 0.0;
        flatten_real(&pyr, &mut flat);
        for (r, v) in flat.iter().enumerate() {
            a[[r, p]] = *v;
        }
    }
    Ok(a)
}
