//! Smooth bump functions built from the polynomial `P_m`.
//!
//! `P_m(x) = (1-x)^m * sum_{j=0..m-1} C(m+j-1, j) x^j` satisfies the
//! reflection identity `P_m(x) + P_m(1-x) = 1`, which makes the sine edges
//! below square-complementary: a rising and a falling edge sharing the same
//! center and width satisfy `rise^2 + fall^2 = 1`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

/// Evaluate `P_m(x)`; total on the reals.
pub fn eval_pm(order: u32, x: f64) -> f64 {
    debug_assert!(order >= 1);
    let m = order as i64;
    // binomial C(m+j-1, j) accumulated multiplicatively
    let mut coef = 1.0;
    let mut sum = 1.0;
    let mut xp = 1.0;
    for j in 1..m {
        coef *= (m + j - 1) as f64 / j as f64;
        xp *= x;
        sum += coef * xp;
    }
    (1.0 - x).powi(order as i32) * sum
}

/// One transition edge of a bump: centered at `center`, half-width `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub center: f64,
    pub eps: f64,
    pub order: u32,
}

impl Edge {
    /// The canonical rising function: 0 left of the edge, 1 right of it,
    /// `sin(pi/2 * P_m((center+eps-xi)/(2 eps)))` across the transition.
    pub fn rise(&self, xi: f64) -> f64 {
        if xi <= self.center - self.eps {
            0.0
        } else if xi >= self.center + self.eps {
            1.0
        } else {
            (FRAC_PI_2 * eval_pm(self.order, (self.center + self.eps - xi) / (2.0 * self.eps)))
                .sin()
        }
    }

    /// Complementary falling function, `sqrt(1 - rise^2)` by construction.
    pub fn fall(&self, xi: f64) -> f64 {
        if xi <= self.center - self.eps {
            1.0
        } else if xi >= self.center + self.eps {
            0.0
        } else {
            (FRAC_PI_2 * eval_pm(self.order, (xi - self.center + self.eps) / (2.0 * self.eps)))
                .sin()
        }
    }
}

/// A four-piece bump `chi_{[left, right]; eps_left, eps_right}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BumpSpec {
    pub left: f64,
    pub right: f64,
    pub eps_left: f64,
    pub eps_right: f64,
    pub order: u32,
}

impl BumpSpec {
    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::config("bump order m must satisfy m >= 1"));
        }
        if !(self.eps_left > 0.0) {
            return Err(Error::config("bump requires eps_left > 0"));
        }
        if !(self.eps_right > 0.0) {
            return Err(Error::config("bump requires eps_right > 0"));
        }
        if self.left >= self.right {
            return Err(Error::config("bump requires left < right"));
        }
        if self.eps_left + self.eps_right > self.right - self.left {
            return Err(Error::config(format!(
                "bump requires eps_left + eps_right <= right - left \
                 ({} + {} > {} - {})",
                self.eps_left, self.eps_right, self.right, self.left
            )));
        }
        Ok(())
    }
}

/// Evaluate the four-piece bump at `xi`. Fails on an invalid spec.
pub fn eval_bump(spec: &BumpSpec, xi: f64) -> Result<f64> {
    spec.validate()?;
    let v = if xi <= spec.left - spec.eps_left || xi >= spec.right + spec.eps_right {
        0.0
    } else if xi < spec.left + spec.eps_left {
        (FRAC_PI_2
            * eval_pm(
                spec.order,
                (spec.left + spec.eps_left - xi) / (2.0 * spec.eps_left),
            ))
        .sin()
    } else if xi <= spec.right - spec.eps_right {
        1.0
    } else {
        (FRAC_PI_2
            * eval_pm(
                spec.order,
                (xi - spec.right + spec.eps_right) / (2.0 * spec.eps_right),
            ))
        .sin()
    };
    Ok(v)
}
