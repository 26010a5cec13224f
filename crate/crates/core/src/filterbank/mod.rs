//! Construction of 1D and 2D tight framelet filter banks and verification
//! of their defining identities.

pub mod bump;
pub mod ctf;
pub mod sampled;
pub mod taps;

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use bump::{eval_bump, eval_pm, BumpSpec, Edge};
pub use ctf::{build_ctf_bank, wrap_to_base, BandResponse, CtfBank1d, CtfParams};
pub use sampled::{sample_bank, verify_bank_identities, IdentityReport, SampledBank};
pub use taps::{dct_filters, dct_matrix, spline_filters, SplineVariant, TapFilter};

/// Identity of a one-dimensional filter inside a bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FilterId {
    /// symmetric low-pass
    A,
    /// positive one-sided low-pass
    Ap,
    /// negative one-sided low-pass
    An,
    /// positive-frequency band `l` (one-based)
    Bp(u32),
    /// negative-frequency band `l`
    Bn(u32),
    /// tap-defined filter index (0 = low-pass)
    Tap(u32),
}

impl FilterId {
    /// Conjugate-reflected partner: swaps positive and negative sides.
    pub fn partner(self) -> FilterId {
        match self {
            FilterId::A => FilterId::A,
            FilterId::Ap => FilterId::An,
            FilterId::An => FilterId::Ap,
            FilterId::Bp(l) => FilterId::Bn(l),
            FilterId::Bn(l) => FilterId::Bp(l),
            FilterId::Tap(k) => FilterId::Tap(k),
        }
    }
}

impl fmt::Display for FilterId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FilterId::A => write!(f, "a"),
            FilterId::Ap => write!(f, "ap"),
            FilterId::An => write!(f, "an"),
            FilterId::Bp(l) => write!(f, "b{l}p"),
            FilterId::Bn(l) => write!(f, "b{l}n"),
            FilterId::Tap(k) => write!(f, "t{k}"),
        }
    }
}

/// Identity of a 2D tensor-product band: row factor x column factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandId {
    pub row: FilterId,
    pub col: FilterId,
}

impl BandId {
    pub fn new(row: FilterId, col: FilterId) -> Self {
        BandId { row, col }
    }

    pub fn partner(self) -> BandId {
        BandId {
            row: self.row.partner(),
            col: self.col.partner(),
        }
    }
}

impl fmt::Display for BandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*{}", self.row, self.col)
    }
}

/// A one-dimensional frequency response, either an analytic band or taps.
#[derive(Debug, Clone)]
pub enum Filter1d {
    Band(BandResponse),
    Taps(TapFilter),
}

impl Filter1d {
    pub fn response(&self, xi: f64) -> Complex64 {
        match self {
            Filter1d::Band(b) => Complex64::new(b.response(xi), 0.0),
            Filter1d::Taps(t) => t.response(wrap_to_base(xi)),
        }
    }

    pub fn taps(&self) -> Option<&TapFilter> {
        match self {
            Filter1d::Taps(t) => Some(t),
            Filter1d::Band(_) => None,
        }
    }

    fn describe(&self) -> String {
        match self {
            Filter1d::Band(b) => format!(
                "band{} rise(c={:.12}, eps={:.12}, m={}) fall(c={:.12}, eps={:.12}, m={})",
                if b.reflected { " reflected" } else { "" },
                b.left.center,
                b.left.eps,
                b.left.order,
                b.right.center,
                b.right.eps,
                b.right.order
            ),
            Filter1d::Taps(t) => {
                let taps: Vec<String> = t.taps.iter().map(|v| format!("{v:.12}")).collect();
                format!("taps offset={} [{}]", t.offset, taps.join(", "))
            }
        }
    }
}

/// One 2D filter: a tensor product of two 1D responses.
#[derive(Debug, Clone)]
pub struct Filter2d {
    pub id: BandId,
    pub row: Filter1d,
    pub col: Filter1d,
    /// dominant direction in degrees, normalized to `(-90, 90]`; present
    /// for directional (band-built) filters only
    pub orientation_deg: Option<f64>,
}

impl Filter2d {
    pub fn response(&self, xi_row: f64, xi_col: f64) -> Complex64 {
        self.row.response(xi_row) * self.col.response(xi_col)
    }
}

/// Provenance of a bank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BankKind {
    Tpctf,
    Spline,
    Dct,
}

impl fmt::Display for BankKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BankKind::Tpctf => write!(f, "tpctf"),
            BankKind::Spline => write!(f, "spline"),
            BankKind::Dct => write!(f, "dct"),
        }
    }
}

/// A 2D tight framelet filter bank: one low-pass plus high-pass filters.
#[derive(Debug, Clone)]
pub struct FilterBank2d {
    pub kind: BankKind,
    pub lowpass: Filter2d,
    pub highpass: Vec<Filter2d>,
}

impl FilterBank2d {
    /// All filters, low-pass first.
    pub fn filters(&self) -> impl Iterator<Item = &Filter2d> {
        std::iter::once(&self.lowpass).chain(self.highpass.iter())
    }

    pub fn band_count(&self) -> usize {
        1 + self.highpass.len()
    }

    /// Position of a high-pass band id, if present.
    pub fn highpass_position(&self, id: &BandId) -> Option<usize> {
        self.highpass.iter().position(|f| f.id == *id)
    }

    /// True when every factor is tap-defined (usable undecimated à trous).
    pub fn is_tap_bank(&self) -> bool {
        self.filters()
            .all(|f| f.row.taps().is_some() && f.col.taps().is_some())
    }

    /// Plain-text description of the bank, one filter per line.
    pub fn describe(&self) -> String {
        let mut out = format!("bank {}\n", self.kind);
        for f in self.filters() {
            out.push_str(&format!(
                "{}\n  row: {}\n  col: {}\n",
                f.id,
                f.row.describe(),
                f.col.describe()
            ));
        }
        out
    }

    /// Distinct orientation labels among the high-pass filters, merging
    /// duplicates (labels closer than 1e-6 degrees).
    pub fn distinct_orientations(&self) -> usize {
        let mut angles: Vec<f64> = self
            .highpass
            .iter()
            .filter_map(|f| f.orientation_deg)
            .collect();
        angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut count = 0;
        let mut last = f64::NEG_INFINITY;
        for a in angles {
            if (a - last).abs() > 1e-6 {
                count += 1;
                last = a;
            }
        }
        count
    }
}

fn orientation_from_centers(w_row: f64, w_col: f64) -> f64 {
    // atoms oscillate along the frequency-center vector; the label is that
    // direction mod 180 degrees, mapped to (-90, 90]
    let mut deg = w_col.atan2(w_row).to_degrees();
    if deg > 90.0 {
        deg -= 180.0;
    } else if deg <= -90.0 {
        deg += 180.0;
    }
    deg
}

/// Tensor the 1D ctf bank into the 2D directional bank: low-pass `a (x) a`,
/// high-pass all products of `{a^p, a^n, b^{l,p}, b^{l,n}}` except the four
/// with both factors one-sided low-pass, `4s(s+2)` in total.
pub fn build_tpctf_2d(bank: &CtfBank1d) -> FilterBank2d {
    let s = bank.params.s;
    let mut factors: Vec<(FilterId, &BandResponse)> =
        vec![(FilterId::Ap, &bank.ap), (FilterId::An, &bank.an)];
    for l in 1..=s {
        factors.push((FilterId::Bp(l), &bank.bp[(l - 1) as usize]));
    }
    for l in 1..=s {
        factors.push((FilterId::Bn(l), &bank.bn[(l - 1) as usize]));
    }

    let lowpass = Filter2d {
        id: BandId::new(FilterId::A, FilterId::A),
        row: Filter1d::Band(bank.a),
        col: Filter1d::Band(bank.a),
        orientation_deg: None,
    };

    let is_lp = |id: &FilterId| matches!(id, FilterId::Ap | FilterId::An);
    let mut highpass = Vec::with_capacity((4 * s * (s + 2)) as usize);
    for (rid, rresp) in &factors {
        for (cid, cresp) in &factors {
            if is_lp(rid) && is_lp(cid) {
                continue;
            }
            highpass.push(Filter2d {
                id: BandId::new(*rid, *cid),
                row: Filter1d::Band(**rresp),
                col: Filter1d::Band(**cresp),
                orientation_deg: Some(orientation_from_centers(
                    rresp.center_frequency(),
                    cresp.center_frequency(),
                )),
            });
        }
    }
    debug_assert_eq!(highpass.len(), (4 * s * (s + 2)) as usize);

    FilterBank2d {
        kind: BankKind::Tpctf,
        lowpass,
        highpass,
    }
}

fn tensor_tap_bank(kind: BankKind, filters: Vec<TapFilter>) -> FilterBank2d {
    let ids: Vec<FilterId> = (0..filters.len() as u32).map(FilterId::Tap).collect();
    let lowpass = Filter2d {
        id: BandId::new(ids[0], ids[0]),
        row: Filter1d::Taps(filters[0].clone()),
        col: Filter1d::Taps(filters[0].clone()),
        orientation_deg: None,
    };
    let mut highpass = Vec::with_capacity(filters.len() * filters.len() - 1);
    for (i, fi) in filters.iter().enumerate() {
        for (j, fj) in filters.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            highpass.push(Filter2d {
                id: BandId::new(ids[i], ids[j]),
                row: Filter1d::Taps(fi.clone()),
                col: Filter1d::Taps(fj.clone()),
                orientation_deg: None,
            });
        }
    }
    FilterBank2d {
        kind,
        lowpass,
        highpass,
    }
}

/// Full tensor product of the 1D spline tight framelet filters
/// (25 filters for cubic, 9 for linear).
pub fn build_spline_bank(variant: SplineVariant) -> FilterBank2d {
    tensor_tap_bank(BankKind::Spline, spline_filters(variant))
}

/// Full tensor product of the undecimated DCT filters (`m^2` filters).
pub fn build_dct_bank(m: u32) -> Result<FilterBank2d> {
    Ok(tensor_tap_bank(BankKind::Dct, dct_filters(m)?))
}

/// Convenience: the default directional 2D bank.
pub fn tpctf6_bank() -> FilterBank2d {
    build_tpctf_2d(&build_ctf_bank(CtfParams::tpctf6()).expect("default parameters admissible"))
}

/// Look up a band's 1D factors in a bank, low-pass included.
pub fn find_band<'a>(bank: &'a FilterBank2d, id: &BandId) -> Result<&'a Filter2d> {
    bank.filters()
        .find(|f| f.id == *id)
        .ok_or_else(|| Error::structure(format!("unknown band {id}")))
}
