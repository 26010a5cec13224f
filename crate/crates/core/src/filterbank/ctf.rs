//! One-dimensional complex tight framelet filter banks defined in the
//! frequency domain by bandpass bumps.
//!
//! The band filters are represented as `sqrt(max(rise_L^2 - rise_R^2, 0))`
//! where `rise_L`, `rise_R` are the canonical rising functions of the two
//! band edges. On bands whose transition zones do not overlap this equals
//! the four-piece bump exactly; when adjacent transition zones do overlap
//! (which happens for the default parameters of the six-filter bank, where
//! `2 eps1` exceeds the band width `(pi - c1)/s`), it is the unique
//! continuation that keeps both tight-framelet identities exact.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::filterbank::bump::Edge;

/// A one-sided frequency band on the base interval, extended 2pi-periodically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandResponse {
    pub left: Edge,
    pub right: Edge,
    /// evaluate at `-xi` instead of `xi` (bit-exact reflection)
    pub reflected: bool,
}

/// Wrap a frequency into the base interval `(-pi, pi]`.
pub fn wrap_to_base(xi: f64) -> f64 {
    let mut t = xi.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

impl BandResponse {
    pub fn new(left: Edge, right: Edge) -> Self {
        debug_assert!(left.center < right.center);
        debug_assert!(right.center + right.eps - (left.center - left.eps) < 2.0 * PI);
        BandResponse {
            left,
            right,
            reflected: false,
        }
    }

    /// Mirror image `xi -> f(-xi)`; for real-valued responses this is the
    /// conjugate-reflected partner filter.
    pub fn mirrored(&self) -> Self {
        BandResponse {
            reflected: !self.reflected,
            ..*self
        }
    }

    fn eval_base(&self, xi: f64) -> f64 {
        let lo = self.left.center - self.left.eps;
        let hi = self.right.center + self.right.eps;
        if xi <= lo || xi >= hi {
            return 0.0;
        }
        let in_left = xi < self.left.center + self.left.eps;
        let in_right = xi > self.right.center - self.right.eps;
        match (in_left, in_right) {
            (false, false) => 1.0,
            (true, false) => self.left.rise(xi),
            (false, true) => self.right.fall(xi),
            // overlapping transition zones: the sqrt-difference form keeps
            // the partition of unity exact (values are mid-range here, so
            // no cancellation)
            (true, true) => {
                let r_l = self.left.rise(xi);
                let r_r = self.right.rise(xi);
                (r_l * r_l - r_r * r_r).max(0.0).sqrt()
            }
        }
    }

    /// 2pi-periodic evaluation on the real line.
    pub fn response(&self, xi: f64) -> f64 {
        let t = wrap_to_base(if self.reflected { -xi } else { xi });
        // base support is narrower than one period, so the shifted copies
        // never overlap and at most one term is nonzero
        self.eval_base(t) + self.eval_base(t - 2.0 * PI) + self.eval_base(t + 2.0 * PI)
    }

    /// Band center on the base interval; used for orientation labels.
    pub fn center_frequency(&self) -> f64 {
        let c = 0.5 * (self.left.center + self.right.center);
        if self.reflected {
            -c
        } else {
            c
        }
    }
}

/// Parameters of the one-dimensional bank with `2s+3` filters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CtfParams {
    /// number of positive-frequency high-pass filters
    pub s: u32,
    pub c1: f64,
    pub eps0: f64,
    pub eps1: f64,
    /// smoothness order of the edge polynomial
    pub order: u32,
}

impl CtfParams {
    /// The six-filter variant used throughout: `s = 2`, `c1 = 119/128`,
    /// `eps0 = 35/128`, `eps1 = 81/128`. The edge order is not pinned by
    /// the construction; the default is 4.
    pub fn tpctf6() -> Self {
        CtfParams {
            s: 2,
            c1: 119.0 / 128.0,
            eps0: 35.0 / 128.0,
            eps1: 81.0 / 128.0,
            order: 4,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.s < 1 {
            return Err(Error::config("ctf bank requires s >= 1"));
        }
        if self.order < 1 {
            return Err(Error::config("ctf bank requires order m >= 1"));
        }
        if !(self.c1 > 0.0) {
            return Err(Error::config("ctf bank requires c1 > 0"));
        }
        if !(self.eps1 > 0.0) {
            return Err(Error::config("ctf bank requires eps1 > 0"));
        }
        if self.eps1 > self.c1 {
            return Err(Error::config(format!(
                "ctf bank requires eps1 <= c1 ({} > {})",
                self.eps1, self.c1
            )));
        }
        if self.eps1 > PI / 2.0 - self.c1 {
            return Err(Error::config(format!(
                "ctf bank requires eps1 <= pi/2 - c1 ({} > {})",
                self.eps1,
                PI / 2.0 - self.c1
            )));
        }
        let s = self.s as f64;
        let third = (self.c1 + (s - 1.0) * PI) / (2.0 * s);
        if self.eps1 > third {
            return Err(Error::config(format!(
                "ctf bank requires eps1 <= (c1 + (s-1) pi)/(2s) ({} > {})",
                self.eps1, third
            )));
        }
        if !(self.eps0 > 0.0) {
            return Err(Error::config("ctf bank requires eps0 > 0"));
        }
        if self.eps0 >= self.c1 - self.eps1 {
            return Err(Error::config(format!(
                "ctf bank requires eps0 < c1 - eps1 ({} >= {})",
                self.eps0,
                self.c1 - self.eps1
            )));
        }
        Ok(())
    }

    /// Band edge `c_l = c1 + (pi - c1)(l-1)/s` for `l = 1..=s+1`.
    pub fn band_edge(&self, l: u32) -> f64 {
        self.c1 + (PI - self.c1) * (l - 1) as f64 / self.s as f64
    }
}

/// The `2s+3` one-dimensional filters.
#[derive(Debug, Clone)]
pub struct CtfBank1d {
    pub params: CtfParams,
    /// symmetric low-pass `a`
    pub a: BandResponse,
    /// positive one-sided low-pass `a^p`
    pub ap: BandResponse,
    /// negative one-sided low-pass `a^n`
    pub an: BandResponse,
    /// positive-frequency band-pass `b^{l,p}`, `l = 1..=s`
    pub bp: Vec<BandResponse>,
    /// negative-frequency band-pass `b^{l,n}`
    pub bn: Vec<BandResponse>,
}

/// Construct the one-dimensional bank; rejects parameter sets violating the
/// admissibility inequalities, naming the violated one.
pub fn build_ctf_bank(params: CtfParams) -> Result<CtfBank1d> {
    params.validate()?;
    let m = params.order;
    let edge = |center: f64, eps: f64| Edge {
        center,
        eps,
        order: m,
    };
    let a = BandResponse::new(
        edge(-params.c1, params.eps1),
        edge(params.c1, params.eps1),
    );
    let ap = BandResponse::new(edge(0.0, params.eps0), edge(params.c1, params.eps1));
    let an = ap.mirrored();
    let mut bp = Vec::with_capacity(params.s as usize);
    let mut bn = Vec::with_capacity(params.s as usize);
    for l in 1..=params.s {
        let band = BandResponse::new(
            edge(params.band_edge(l), params.eps1),
            edge(params.band_edge(l + 1), params.eps1),
        );
        bp.push(band);
        bn.push(band.mirrored());
    }
    Ok(CtfBank1d {
        params,
        a,
        ap,
        an,
        bp,
        bn,
    })
}
