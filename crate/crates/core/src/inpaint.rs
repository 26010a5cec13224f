//! Iterative thresholding inpainting: the two-stage directional-framelet
//! algorithm with bivariate shrinkage, and the generic single-frame
//! iteration used for the tap-bank baselines.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::filterbank::CtfParams;
use crate::shrinkage::{bivariate_shrink, hard, soft, NormMode, ShrinkContext};
use crate::transform::{forward, inverse, Pyramid, TransformSpec};

/// The observable region: `true` marks an observed pixel.
#[derive(Debug, Clone)]
pub struct Mask {
    observed: Array2<bool>,
    observed_count: usize,
}

impl Mask {
    pub fn new(observed: Array2<bool>) -> Result<Self> {
        let observed_count = observed.iter().filter(|&&v| v).count();
        if observed_count == 0 {
            return Err(Error::config("mask has no observed pixels"));
        }
        Ok(Mask {
            observed,
            observed_count,
        })
    }

    pub fn dim(&self) -> (usize, usize) {
        self.observed.dim()
    }

    pub fn observed(&self) -> &Array2<bool> {
        &self.observed
    }

    pub fn is_observed(&self, i: usize, j: usize) -> bool {
        self.observed[[i, j]]
    }

    pub fn observed_count(&self) -> usize {
        self.observed_count
    }

    /// Missing fraction `r = 1 - #observed / #pixels`.
    pub fn missing_ratio(&self) -> f64 {
        1.0 - self.observed_count as f64 / self.observed.len() as f64
    }

    /// `P_Omega x`: zero out missing pixels.
    pub fn project(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.clone();
        out.zip_mut_with(&self.observed, |v, &o| {
            if !o {
                *v = 0.0;
            }
        });
        out
    }

    /// `P_Omega y + (I - P_Omega) x`.
    pub fn blend(&self, y: &Array2<f64>, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.clone();
        out.indexed_iter_mut().for_each(|((i, j), v)| {
            if self.observed[[i, j]] {
                *v = y[[i, j]];
            }
        });
        out
    }

    /// l2 norm of `x` restricted to the missing region.
    pub fn missing_norm(&self, x: &Array2<f64>) -> f64 {
        let mut acc = 0.0;
        for ((i, j), v) in x.indexed_iter() {
            if !self.observed[[i, j]] {
                acc += v * v;
            }
        }
        acc.sqrt()
    }

    /// l2 norm of `x` restricted to the observed region.
    pub fn observed_norm(&self, x: &Array2<f64>) -> f64 {
        let mut acc = 0.0;
        for ((i, j), v) in x.indexed_iter() {
            if self.observed[[i, j]] {
                acc += v * v;
            }
        }
        acc.sqrt()
    }
}

/// Two-stage decreasing threshold schedule.
#[derive(Debug, Clone)]
pub struct Schedule {
    pub lambda_min: f64,
    pub lambda_mid: f64,
    pub lambda_max: f64,
    pub lambda1: Vec<f64>,
    pub lambda2: Vec<f64>,
    pub tol1: f64,
    pub tol2: f64,
    /// unconditional bound on outer iterations
    pub iteration_cap: usize,
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        if self.lambda1.is_empty() || self.lambda2.is_empty() {
            return Err(Error::config("schedule stages must be nonempty"));
        }
        if !(self.tol1 > 0.0 && self.tol2 > 0.0) {
            return Err(Error::config("schedule tolerances must be positive"));
        }
        if self.iteration_cap == 0 {
            return Err(Error::config("iteration cap must be positive"));
        }
        for w in self.lambda1.windows(2).chain(self.lambda2.windows(2)) {
            if w[1] >= w[0] {
                return Err(Error::config("schedule thresholds must strictly decrease"));
            }
        }
        Ok(())
    }

    /// A degenerate single-threshold schedule (fixed-point experiments).
    pub fn constant(lambda: f64, tol: f64, iteration_cap: usize) -> Self {
        Schedule {
            lambda_min: lambda,
            lambda_mid: lambda,
            lambda_max: lambda,
            lambda1: vec![lambda],
            lambda2: vec![lambda],
            tol1: tol,
            tol2: tol,
            iteration_cap,
        }
    }
}

/// Build the schedule from the noise level and missing ratio:
/// `lambda_min = max(1, sigma (1 - r^2/2))`, `lambda_max = 512`,
/// `lambda_mid = min(max(2 lambda_min + 10, 20), lambda_max)`, geometric
/// stages `Lambda1(i) = r1^((i-N1)/(N1-1)) lambda_mid` and
/// `Lambda2(i) = r2^((i-N2)/N2) lambda_min`, and the iteration parameters
/// `(N1, tol1, N2, tol2) = (5, 5e-3, 8, 1e-4)` for `r < 0.5`,
/// `(8, 5e-3, 5, 1e-3)` otherwise.
pub fn make_schedule(sigma: f64, r: f64) -> Result<Schedule> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::config(format!(
            "missing ratio r must lie in [0, 1), got {r}"
        )));
    }
    if sigma < 0.0 {
        return Err(Error::config("sigma must be nonnegative"));
    }
    let lambda_min = 1.0_f64.max(sigma * (1.0 - r * r / 2.0));
    let lambda_max = 512.0;
    let lambda_mid = (2.0 * lambda_min + 10.0).max(20.0).min(lambda_max);
    let (n1, tol1, n2, tol2) = if r < 0.5 {
        (5usize, 5e-3, 8usize, 1e-4)
    } else {
        (8, 5e-3, 5, 1e-3)
    };
    debug_assert!(n1 >= 2, "Lambda1 needs N1 >= 2");
    let r1 = lambda_mid / lambda_max;
    let r2 = lambda_min / lambda_mid;
    let lambda1 = (1..=n1)
        .map(|i| r1.powf((i as f64 - n1 as f64) / (n1 as f64 - 1.0)) * lambda_mid)
        .collect();
    let lambda2 = (1..=n2)
        .map(|i| r2.powf((i as f64 - n2 as f64) / n2 as f64) * lambda_min)
        .collect();
    let schedule = Schedule {
        lambda_min,
        lambda_mid,
        lambda_max,
        lambda1,
        lambda2,
        tol1,
        tol2,
        iteration_cap: 2000,
    };
    debug_assert!(lambda_min >= sigma * (1.0 - r).sqrt());
    schedule.validate()?;
    Ok(schedule)
}

/// Inpainting parameters; `schedule` overrides the built-in one.
#[derive(Debug, Clone)]
pub struct InpaintConfig {
    pub sigma: f64,
    /// decomposition depth; `None` picks the default for the image size
    pub levels: Option<u32>,
    pub ctf: CtfParams,
    pub schedule: Option<Schedule>,
    /// restore exact observed pixels after the iteration
    pub paste_observed: bool,
    pub window_radius: usize,
    pub norm_mode: NormMode,
}

impl Default for InpaintConfig {
    fn default() -> Self {
        InpaintConfig {
            sigma: 0.0,
            levels: None,
            ctf: CtfParams::tpctf6(),
            schedule: None,
            paste_observed: false,
            window_radius: 3,
            norm_mode: NormMode::LevelDependent,
        }
    }
}

/// Result of an inpainting run.
#[derive(Debug, Clone)]
pub struct InpaintOutcome {
    pub image: Array2<f64>,
    pub iterations: usize,
    /// number of times the error dropped below the stage tolerance
    /// (equals `N1 + N2` when the run ends via the break branch)
    pub advances: usize,
    pub converged: bool,
    pub warning: Option<String>,
    /// threshold used at each outer iteration
    pub lambda_trace: Vec<f64>,
    pub final_error: f64,
}

/// Shrinkage rule for the generic iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShrinkRule {
    Soft,
    Hard,
    Bivariate,
}

fn apply_rule(
    pyr: &Pyramid,
    rule: ShrinkRule,
    lambda: f64,
    ctx: Option<&ShrinkContext>,
) -> Pyramid {
    match rule {
        ShrinkRule::Bivariate => {
            bivariate_shrink(pyr, &ctx.expect("bivariate needs a context").with_lambda(lambda))
        }
        ShrinkRule::Soft | ShrinkRule::Hard => {
            let mut out = pyr.clone();
            for level in &mut out.detail {
                for band in &mut level.bands {
                    band.coeffs.mapv_inplace(|c| match rule {
                        ShrinkRule::Soft => soft(c, lambda),
                        ShrinkRule::Hard => hard(c, lambda),
                        ShrinkRule::Bivariate => unreachable!(),
                    });
                }
            }
            out
        }
    }
}

struct StageWalk<'a> {
    schedule: &'a Schedule,
    index: usize, // one-based threshold index i
}

impl<'a> StageWalk<'a> {
    fn new(schedule: &'a Schedule) -> Self {
        StageWalk { schedule, index: 1 }
    }

    fn lambda(&self) -> f64 {
        let n1 = self.schedule.lambda1.len();
        if self.index <= n1 {
            self.schedule.lambda1[self.index - 1]
        } else {
            self.schedule.lambda2[self.index - n1 - 1]
        }
    }

    /// Advance on `error`; returns `(advanced, finished)`.
    #[allow(clippy::if_same_then_else)]
    fn step(&mut self, error: f64) -> (bool, bool) {
        let n1 = self.schedule.lambda1.len();
        let n2 = self.schedule.lambda2.len();
        if error < self.schedule.tol1 && self.index < n1 {
            self.index += 1;
            (true, false)
        } else if error < self.schedule.tol2 && self.index >= n1 && self.index < n1 + n2 {
            self.index += 1;
            (true, false)
        } else if error < self.schedule.tol2 && self.index == n1 + n2 {
            (true, true)
        } else {
            (false, false)
        }
    }
}

fn check_setup(y: &Array2<f64>, mask: &Mask, spec: &TransformSpec) -> Result<f64> {
    if y.dim() != mask.dim() {
        return Err(Error::structure(format!(
            "image {:?} and mask {:?} shapes differ",
            y.dim(),
            mask.dim()
        )));
    }
    spec.validate_for(y.nrows(), y.ncols())?;
    let obs_norm = mask.observed_norm(y);
    if obs_norm == 0.0 {
        return Err(Error::config("zero observed energy"));
    }
    Ok(obs_norm)
}

/// The directional-framelet inpainting algorithm: iterate
/// `y_l = P y + (I - P) x_l`, `c = eta_bs(D' y_l)`, `x_{l+1} = D c`,
/// advancing the threshold through `Lambda1` then `Lambda2` whenever the
/// relative change on the missing region drops below the stage tolerance.
pub fn inpaint(y: &Array2<f64>, mask: &Mask, config: &InpaintConfig) -> Result<InpaintOutcome> {
    let n = y.nrows();
    let levels = config
        .levels
        .unwrap_or_else(|| TransformSpec::default_levels(n));
    let spec = TransformSpec::tpctf(config.ctf, levels)?;
    let obs_norm = check_setup(y, mask, &spec)?;
    let schedule = match &config.schedule {
        Some(s) => {
            s.validate()?;
            s.clone()
        }
        None => make_schedule(config.sigma, mask.missing_ratio())?,
    };
    let ctx = ShrinkContext::with_options(&spec, n, 0.0, config.window_radius, config.norm_mode)?;

    let mut x = Array2::zeros(y.dim());
    let mut walk = StageWalk::new(&schedule);
    let mut outcome = InpaintOutcome {
        image: Array2::zeros(y.dim()),
        iterations: 0,
        advances: 0,
        converged: false,
        warning: None,
        lambda_trace: Vec::new(),
        final_error: f64::INFINITY,
    };
    let mut best = (f64::INFINITY, x.clone());

    while outcome.iterations < schedule.iteration_cap {
        outcome.iterations += 1;
        let lambda = walk.lambda();
        outcome.lambda_trace.push(lambda);

        let y_l = mask.blend(y, &x);
        let pyr = forward(&y_l, &spec)?;
        let shrunk = bivariate_shrink(&pyr, &ctx.with_lambda(lambda));
        let x_next = inverse(&shrunk, &spec)?;

        let diff = &x_next - &x;
        let error = mask.missing_norm(&diff) / obs_norm;
        outcome.final_error = error;
        x = x_next;
        if error < best.0 {
            best = (error, x.clone());
        }

        let (advanced, finished) = walk.step(error);
        if advanced {
            outcome.advances += 1;
        }
        if finished {
            outcome.converged = true;
            break;
        }
    }

    outcome.image = if outcome.converged {
        x
    } else {
        outcome.warning = Some(format!(
            "iteration cap {} reached before the final threshold converged; \
             returning the best iterate",
            schedule.iteration_cap
        ));
        best.1
    };
    if config.paste_observed {
        outcome.image = mask.blend(y, &outcome.image);
    }
    Ok(outcome)
}

/// The generic single-frame iteration
/// `x_l = P y + (I - P) D eta_Lambda(D' x_{l-1})` with a decreasing
/// threshold schedule; supports the undecimated tap banks as baselines.
pub fn iterative_inpaint_generic(
    y: &Array2<f64>,
    mask: &Mask,
    spec: &TransformSpec,
    rule: ShrinkRule,
    schedule: &Schedule,
) -> Result<InpaintOutcome> {
    schedule.validate()?;
    let obs_norm = check_setup(y, mask, spec)?;
    let ctx = if rule == ShrinkRule::Bivariate {
        Some(ShrinkContext::for_spec(spec, y.nrows(), 0.0)?)
    } else {
        None
    };

    let mut x: Array2<f64> = Array2::zeros(y.dim());
    let mut walk = StageWalk::new(schedule);
    let mut outcome = InpaintOutcome {
        image: Array2::zeros(y.dim()),
        iterations: 0,
        advances: 0,
        converged: false,
        warning: None,
        lambda_trace: Vec::new(),
        final_error: f64::INFINITY,
    };
    let mut best = (f64::INFINITY, x.clone());

    while outcome.iterations < schedule.iteration_cap {
        outcome.iterations += 1;
        let lambda = walk.lambda();
        outcome.lambda_trace.push(lambda);

        let pyr = forward(&x, spec)?;
        let shrunk = apply_rule(&pyr, rule, lambda, ctx.as_ref());
        let synth = inverse(&shrunk, spec)?;
        let x_next = mask.blend(y, &synth);

        let diff = &x_next - &x;
        let error = diff.iter().map(|v| v * v).sum::<f64>().sqrt() / obs_norm;
        outcome.final_error = error;
        x = x_next;
        if error < best.0 {
            best = (error, x.clone());
        }

        let (advanced, finished) = walk.step(error);
        if advanced {
            outcome.advances += 1;
        }
        if finished {
            outcome.converged = true;
            break;
        }
    }

    outcome.image = if outcome.converged {
        x
    } else {
        outcome.warning = Some(format!(
            "iteration cap {} reached before the final threshold converged; \
             returning the best iterate",
            schedule.iteration_cap
        ));
        best.1
    };
    Ok(outcome)
}
