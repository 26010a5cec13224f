//! Exact sampling of filter responses on DFT grids and numerical
//! verification of the tight-framelet identities.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::filterbank::{BandId, BankKind, FilterBank2d};

/// Frequencies of an `n`-point DFT grid: index `k` maps to `2 pi k / n`
/// shifted into `(-pi, pi]`.
pub fn freq_grid(n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let xi = 2.0 * PI * k as f64 / n as f64;
            if k > n / 2 {
                xi - 2.0 * PI
            } else {
                xi
            }
        })
        .collect()
}

/// One filter sampled separably on an `n x n` grid.
#[derive(Debug, Clone)]
pub struct SampledFilter {
    pub id: BandId,
    pub row: Vec<Complex64>,
    pub col: Vec<Complex64>,
}

impl SampledFilter {
    pub fn at(&self, j_row: usize, j_col: usize) -> Complex64 {
        self.row[j_row] * self.col[j_col]
    }
}

/// A whole bank sampled on one grid, low-pass first.
#[derive(Debug, Clone)]
pub struct SampledBank {
    pub n: usize,
    pub kind: BankKind,
    pub filters: Vec<SampledFilter>,
}

/// Sample every filter of `bank` at the DFT grid of an `n x n` image at
/// `level` (the grid halves once per level; the analytic responses do not
/// change).
pub fn sample_bank(bank: &FilterBank2d, n: usize, level: u32) -> Result<SampledBank> {
    if !n.is_multiple_of(1usize << level) {
        return Err(Error::config(format!(
            "grid size {n} not divisible by 2^{level}"
        )));
    }
    let n_eff = n >> level;
    let min = if bank.kind == BankKind::Tpctf { 8 } else { 4 };
    if n_eff < min || !n_eff.is_multiple_of(2) {
        return Err(Error::config(format!(
            "grid size {n_eff} too small for bank {} (need even n >= {min})",
            bank.kind
        )));
    }
    let grid = freq_grid(n_eff);
    let filters = bank
        .filters()
        .map(|f| SampledFilter {
            id: f.id,
            row: grid.iter().map(|&xi| f.row.response(xi)).collect(),
            col: grid.iter().map(|&xi| f.col.response(xi)).collect(),
        })
        .collect();
    Ok(SampledBank {
        n: n_eff,
        kind: bank.kind,
        filters,
    })
}

/// Maximum deviations of the two defining identities over a sampled grid.
///
/// `partition` is `max |sum_f |f(xi)|^2 - 1|`; `half_shift[e]` is
/// `max |sum_f f(xi) conj(f(xi + pi e))|` for the three nonzero shifts
/// `e = (0,1), (1,0), (1,1)`.
#[derive(Debug, Clone, Copy)]
pub struct IdentityReport {
    pub n: usize,
    pub partition: f64,
    pub half_shift: [f64; 3],
}

impl IdentityReport {
    pub fn max_deviation(&self) -> f64 {
        self.half_shift
            .iter()
            .fold(self.partition, |acc, &v| acc.max(v))
    }

    /// Deviation of the partition identity alone (the only one required of
    /// undecimated banks).
    pub fn partition_only(&self) -> f64 {
        self.partition
    }
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} partition={:.3e} shift01={:.3e} shift10={:.3e} shift11={:.3e}",
            self.n, self.partition, self.half_shift[0], self.half_shift[1], self.half_shift[2]
        )
    }
}

/// Check `sum_f f(xi) conj(f(xi + pi e)) = delta_{e,0}` for all
/// `e in {0,1}^2` over the sampled grid.
pub fn verify_bank_identities(bank: &SampledBank) -> IdentityReport {
    let n = bank.n;
    let half = n / 2;
    let mut partition = 0.0_f64;
    let mut half_shift = [0.0_f64; 3];
    for j1 in 0..n {
        for j2 in 0..n {
            for (ei, &(e1, e2)) in [(0usize, 0usize), (0, 1), (1, 0), (1, 1)].iter().enumerate() {
                let k1 = (j1 + e1 * half) % n;
                let k2 = (j2 + e2 * half) % n;
                let mut acc = Complex64::new(0.0, 0.0);
                for f in &bank.filters {
                    acc += f.at(j1, j2) * f.at(k1, k2).conj();
                }
                if ei == 0 {
                    partition = partition.max((acc.re - 1.0).abs().max(acc.im.abs()));
                } else {
                    half_shift[ei - 1] = half_shift[ei - 1].max(acc.norm());
                }
            }
        }
    }
    IdentityReport {
        n,
        partition,
        half_shift,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filterbank::{build_dct_bank, build_spline_bank, tpctf6_bank, SplineVariant};

    #[test]
    fn grid_convention() {
        let g = freq_grid(8);
        assert_eq!(g[0], 0.0);
        assert!((g[4] - PI).abs() < 1e-15); // n/2 maps to +pi
        assert!((g[5] + 3.0 * PI / 4.0).abs() < 1e-15);
        assert!((g[7] + PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn tpctf6_identities_hold_on_64() {
        let sampled = sample_bank(&tpctf6_bank(), 64, 0).unwrap();
        let report = verify_bank_identities(&sampled);
        assert!(report.max_deviation() <= 1e-12, "{report}");
    }

    #[test]
    fn deleting_a_filter_breaks_partition() {
        let mut sampled = sample_bank(&tpctf6_bank(), 64, 0).unwrap();
        let pos = sampled
            .filters
            .iter()
            .position(|f| f.id.to_string() == "b1p*b1p")
            .unwrap();
        sampled.filters.remove(pos);
        let report = verify_bank_identities(&sampled);
        assert!(report.partition > 0.1, "{report}");
    }

    #[test]
    fn spline_cubic_identities() {
        let sampled = sample_bank(&build_spline_bank(SplineVariant::Cubic), 64, 0).unwrap();
        let report = verify_bank_identities(&sampled);
        assert!(report.max_deviation() <= 1e-12, "{report}");
    }

    #[test]
    fn dct_partition_only() {
        let sampled = sample_bank(&build_dct_bank(7).unwrap(), 64, 0).unwrap();
        let report = verify_bank_identities(&sampled);
        assert!(report.partition_only() <= 1e-12, "{report}");
    }

    #[test]
    fn lowpass_sampled_real_even() {
        // a is real and even; sampled response must obey a(-xi) = conj(a(xi))
        let sampled = sample_bank(&tpctf6_bank(), 64, 0).unwrap();
        let a = &sampled.filters[0];
        for k in 1..64 {
            let v = a.row[k];
            let w = a.row[64 - k];
            assert!(v.im == 0.0);
            assert!((v - w.conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn level_halves_grid() {
        let sampled = sample_bank(&tpctf6_bank(), 64, 2).unwrap();
        assert_eq!(sampled.n, 16);
    }

    #[test]
    fn too_small_grid_rejected() {
        assert!(sample_bank(&tpctf6_bank(), 4, 0).is_err());
        assert!(sample_bank(&tpctf6_bank(), 64, 4).is_err());
    }
}
