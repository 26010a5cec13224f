//! Proximal-gradient solver for the balanced convex model
//! `min 1/2 ||B D c - b||^2 + ||diag(lambda) c||_1 + kappa ||(I - D'D) c||^2`
//! and numerical verification of its grouping-effect bounds and first-order
//! (KKT) relations. The elastic net is the special case `D = sqrt(2) I`,
//! `B = (sqrt(2)/2) E`.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::harness::rng::StreamRng;
use crate::shrinkage::soft_real;

/// Problem data. `frame` is the d x n synthesis matrix (tightness is NOT
/// required by the theory), `obs` the observation matrix applied after
/// synthesis (typically a diagonal 0/1 projection), `data` the observed
/// vector, `weights` the positive per-coefficient l1 weights.
#[derive(Debug, Clone)]
pub struct BalancedProblem {
    pub frame: Array2<f64>,
    pub obs: Array2<f64>,
    pub data: Array1<f64>,
    pub weights: Array1<f64>,
    pub kappa: f64,
}

impl BalancedProblem {
    pub fn new(
        frame: Array2<f64>,
        obs: Array2<f64>,
        data: Array1<f64>,
        weights: Array1<f64>,
        kappa: f64,
    ) -> Result<Self> {
        let (d, n) = frame.dim();
        if d == 0 || n == 0 {
            return Err(Error::config("frame must be nonempty"));
        }
        if obs.ncols() != d {
            return Err(Error::structure(format!(
                "obs has {} columns, frame has {} rows",
                obs.ncols(),
                d
            )));
        }
        if data.len() != obs.nrows() {
            return Err(Error::structure(format!(
                "data length {} does not match obs rows {}",
                data.len(),
                obs.nrows()
            )));
        }
        if weights.len() != n {
            return Err(Error::structure(format!(
                "weights length {} does not match frame columns {n}",
                weights.len()
            )));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::config("all weights must be positive"));
        }
        if !(kappa > 0.0) {
            return Err(Error::config("kappa must be positive"));
        }
        Ok(BalancedProblem {
            frame,
            obs,
            data,
            weights,
            kappa,
        })
    }

    /// Uniform-weight convenience constructor.
    pub fn uniform(
        frame: Array2<f64>,
        obs: Array2<f64>,
        data: Array1<f64>,
        lambda: f64,
        kappa: f64,
    ) -> Result<Self> {
        let n = frame.ncols();
        Self::new(frame, obs, data, Array1::from_elem(n, lambda), kappa)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.frame.dim()
    }

    fn check_coeffs(&self, c: &Array1<f64>) -> Result<()> {
        if c.len() != self.frame.ncols() {
            return Err(Error::structure(format!(
                "coefficient length {} does not match frame columns {}",
                c.len(),
                self.frame.ncols()
            )));
        }
        Ok(())
    }

    /// `(I - D'D) c`
    fn range_defect(&self, c: &Array1<f64>) -> Array1<f64> {
        c - &self.frame.t().dot(&self.frame.dot(c))
    }
}

/// Exact evaluation of the three-term objective.
pub fn objective(problem: &BalancedProblem, c: &Array1<f64>) -> Result<f64> {
    problem.check_coeffs(c)?;
    let fit = &problem.obs.dot(&problem.frame.dot(c)) - &problem.data;
    let defect = problem.range_defect(c);
    let l1: f64 = c
        .iter()
        .zip(problem.weights.iter())
        .map(|(x, w)| w * x.abs())
        .sum();
    Ok(0.5 * fit.dot(&fit) + l1 + problem.kappa * defect.dot(&defect))
}

/// Largest singular value by power iteration on `A'A` (200 steps, tol 1e-12,
/// deterministic start).
pub fn spectral_norm(a: &Array2<f64>) -> f64 {
    let n = a.ncols();
    if n == 0 || a.nrows() == 0 {
        return 0.0;
    }
    let mut v = Array1::from_shape_fn(n, |i| 1.0 + 1e-3 * i as f64);
    let norm = v.dot(&v).sqrt();
    v.mapv_inplace(|x| x / norm);
    let mut sigma2 = 0.0_f64;
    for _ in 0..200 {
        let mut w = a.t().dot(&a.dot(&v));
        let next = w.dot(&v);
        let wn = w.dot(&w).sqrt();
        if wn == 0.0 {
            return 0.0;
        }
        w.mapv_inplace(|x| x / wn);
        v = w;
        if (next - sigma2).abs() <= 1e-12 * sigma2.max(1.0) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    sigma2.max(0.0).sqrt()
}

/// Solver outcome.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub coeffs: Array1<f64>,
    pub objective: f64,
    pub iterations: usize,
    pub rel_change: f64,
    pub converged: bool,
}

/// Spectral norm of the symmetric defect operator `I - D'D` by power
/// iteration on its square, applied as mat-vecs with `D` (the operator is
/// never materialized, so large frames stay cheap).
fn defect_norm(frame: &Array2<f64>) -> f64 {
    let n = frame.ncols();
    let q = |c: &Array1<f64>| -> Array1<f64> { c - &frame.t().dot(&frame.dot(c)) };
    let mut v = Array1::from_shape_fn(n, |i| 1.0 + 1e-3 * i as f64);
    let norm = v.dot(&v).sqrt();
    v.mapv_inplace(|x| x / norm);
    let mut sigma2 = 0.0_f64;
    for _ in 0..200 {
        let mut w = q(&q(&v));
        let next = w.dot(&v);
        let wn = w.dot(&w).sqrt();
        if wn == 0.0 {
            return 0.0;
        }
        w.mapv_inplace(|x| x / wn);
        v = w;
        if (next - sigma2).abs() <= 1e-12 * sigma2.max(1.0) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    sigma2.max(0.0).sqrt()
}

/// Accelerated proximal gradient with fixed step `1/L`,
/// `L = ||BD||_2^2 + 2 kappa ||I - D'D||_2^2`, componentwise soft threshold
/// with `weights/L`, and function-value restart so the objective never
/// increases. Stops when the relative iterate change drops below `tol`.
pub fn solve_balanced(problem: &BalancedProblem, tol: f64, maxit: usize) -> SolveResult {
    let (_, n) = problem.dims();
    let bd = problem.obs.dot(&problem.frame);
    let l = spectral_norm(&bd).powi(2) + 2.0 * problem.kappa * defect_norm(&problem.frame).powi(2);
    let l = l.max(1e-12);

    let grad = |c: &Array1<f64>| -> Array1<f64> {
        let fit = &bd.dot(c) - &problem.data;
        // (I - D'D)^2 c via mat-vecs with D
        let q = problem.range_defect(c);
        let qq = problem.range_defect(&q);
        bd.t().dot(&fit) + 2.0 * problem.kappa * qq
    };
    let prox = |v: &Array1<f64>| -> Array1<f64> {
        Array1::from_shape_fn(n, |j| soft_real(v[j], problem.weights[j] / l))
    };

    let mut x = Array1::zeros(n);
    let mut fx = objective(problem, &x).expect("validated shapes");
    let mut y = x.clone();
    let mut t = 1.0_f64;
    let mut iterations = 0;
    let mut rel_change = f64::INFINITY;
    let mut converged = false;

    while iterations < maxit {
        iterations += 1;
        let mut z = prox(&(&y - &(grad(&y) / l)));
        let mut fz = objective(problem, &z).expect("validated shapes");
        if fz > fx {
            // momentum overshoot: restart from the monotone iterate
            t = 1.0;
            z = prox(&(&x - &(grad(&x) / l)));
            fz = objective(problem, &z).expect("validated shapes");
        }
        debug_assert!(
            fz <= fx + 1e-12 * (1.0 + fx.abs()),
            "objective increased: {fx} -> {fz}"
        );
        let diff = &z - &x;
        rel_change = diff.dot(&diff).sqrt() / (1.0 + z.dot(&z).sqrt());
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = &z + &(diff.mapv(|v| v * (t - 1.0) / t_next));
        x = z;
        fx = fz;
        t = t_next;
        if rel_change < tol {
            converged = true;
            break;
        }
    }

    SolveResult {
        coeffs: x,
        objective: fx,
        iterations,
        rel_change,
        converged,
    }
}

/// Maximum first-order (KKT) residual over coordinates: with
/// `g_j = D_j'(2 kappa (2I - DD') D c - B'(B D c - b))`, a minimizer
/// satisfies `g_j = sgn(c_j)(lambda_j + 2 kappa |c_j|)` on the support and
/// `|g_j| <= lambda_j` off it.
pub fn kkt_residual(problem: &BalancedProblem, c: &Array1<f64>) -> Result<f64> {
    problem.check_coeffs(c)?;
    let dc = problem.frame.dot(c);
    let fit = &problem.obs.dot(&dc) - &problem.data;
    let inner = 2.0 * problem.kappa * (2.0 * &dc - problem.frame.dot(&problem.frame.t().dot(&dc)))
        - problem.obs.t().dot(&fit);
    let g = problem.frame.t().dot(&inner);
    let mut worst = 0.0_f64;
    for j in 0..c.len() {
        let r = if c[j] != 0.0 {
            (g[j] - c[j].signum() * (problem.weights[j] + 2.0 * problem.kappa * c[j].abs())).abs()
        } else {
            (g[j].abs() - problem.weights[j]).max(0.0)
        };
        worst = worst.max(r);
    }
    Ok(worst)
}

/// The grouping-effect bound on `|c_j - c_k|`:
/// `(1/2kappa) |lambda_j - lambda_k| +
///  |(D_j - D_k)'((2I - DD') D c - (1/2kappa) B'(B D c - b))|`.
/// With equal weights the first term vanishes.
pub fn grouping_bound(problem: &BalancedProblem, c: &Array1<f64>, j: usize, k: usize) -> Result<f64> {
    problem.check_coeffs(c)?;
    let n = problem.frame.ncols();
    if j >= n || k >= n {
        return Err(Error::structure(format!(
            "column index out of range: j={j}, k={k}, n={n}"
        )));
    }
    let dc = problem.frame.dot(c);
    let fit = &problem.obs.dot(&dc) - &problem.data;
    let vector = 2.0 * &dc - problem.frame.dot(&problem.frame.t().dot(&dc))
        - problem.obs.t().dot(&fit) / (2.0 * problem.kappa);
    let dj = problem.frame.column(j);
    let dk = problem.frame.column(k);
    let proj = dj.dot(&vector) - dk.dot(&vector);
    Ok((problem.weights[j] - problem.weights[k]).abs() / (2.0 * problem.kappa) + proj.abs())
}

/// Outcome of a grouping verification run.
#[derive(Debug, Clone)]
pub struct GroupingReport {
    pub solve: SolveResult,
    pub kkt: f64,
    /// minimum over pairs of `bound + slack - |c_j - c_k|`; negative means
    /// a violated pair
    pub worst_margin: f64,
    pub violations: usize,
    /// `||B D c - b||_2 <= ||b||_2`
    pub fidelity_ok: bool,
    /// `||c||_1 <= ||b||_2^2 / (2 min_j lambda_j)`
    pub l1_ok: bool,
    pub slack: f64,
}

impl GroupingReport {
    pub fn passed(&self) -> bool {
        self.solve.converged && self.violations == 0 && self.fidelity_ok && self.l1_ok
    }
}

/// Solve, then check the pairwise grouping inequality over all `(j, k)`
/// with `slack` absorbing solver inexactness, plus the minimizer's loose
/// bounds on fidelity and the weighted l1 norm.
pub fn verify_grouping(problem: &BalancedProblem, tol: f64, maxit: usize) -> GroupingReport {
    let slack = 1e-6;
    let solve = solve_balanced(problem, tol, maxit);
    let c = &solve.coeffs;
    let kkt = kkt_residual(problem, c).expect("validated shapes");
    let n = c.len();

    // shared pieces of the bound, computed once
    let dc = problem.frame.dot(c);
    let fit = &problem.obs.dot(&dc) - &problem.data;
    let vector = 2.0 * &dc - problem.frame.dot(&problem.frame.t().dot(&dc))
        - problem.obs.t().dot(&fit) / (2.0 * problem.kappa);
    let col_proj = problem.frame.t().dot(&vector);

    let mut worst_margin = f64::INFINITY;
    let mut violations = 0usize;
    for j in 0..n {
        for k in (j + 1)..n {
            let bound = (problem.weights[j] - problem.weights[k]).abs()
                / (2.0 * problem.kappa)
                + (col_proj[j] - col_proj[k]).abs();
            let margin = bound + slack - (c[j] - c[k]).abs();
            if margin < worst_margin {
                worst_margin = margin;
            }
            if margin < 0.0 {
                violations += 1;
            }
        }
    }

    let bnorm = problem.data.dot(&problem.data).sqrt();
    let fidelity_ok = fit.dot(&fit).sqrt() <= bnorm + slack;
    let min_w = problem.weights.iter().cloned().fold(f64::INFINITY, f64::min);
    let l1: f64 = c.iter().map(|v| v.abs()).sum();
    let l1_ok = l1 <= bnorm * bnorm / (2.0 * min_w) + slack;

    GroupingReport {
        solve,
        kkt,
        worst_margin,
        violations,
        fidelity_ok,
        l1_ok,
        slack,
    }
}

/// The elastic-net problem `min 1/2 ||E c - b||^2 + lambda ||c||_1 +
/// kappa ||c||_2^2` expressed in balanced form via `D = sqrt(2) I`,
/// `B = (sqrt(2)/2) E`.
pub fn elastic_net_as_balanced(
    e: &Array2<f64>,
    b: &Array1<f64>,
    lambda: f64,
    kappa: f64,
) -> Result<BalancedProblem> {
    let n = e.ncols();
    let s = 2.0_f64.sqrt();
    BalancedProblem::uniform(
        Array2::eye(n) * s,
        e.mapv(|v| v * (s / 2.0)),
        b.clone(),
        lambda,
        kappa,
    )
}

/// Both solution paths for the elastic net.
#[derive(Debug, Clone)]
pub struct ElasticNetSolve {
    /// direct proximal-gradient on the elastic-net objective
    pub direct: SolveResult,
    /// via the balanced-form reduction
    pub via_balanced: SolveResult,
    /// max absolute coefficient gap between the two paths
    pub path_gap: f64,
}

/// Solve the elastic net directly and through the balanced reduction.
pub fn solve_elastic_net(
    e: &Array2<f64>,
    b: &Array1<f64>,
    lambda: f64,
    kappa: f64,
    tol: f64,
    maxit: usize,
) -> Result<ElasticNetSolve> {
    if e.nrows() != b.len() {
        return Err(Error::structure(format!(
            "data length {} does not match matrix rows {}",
            b.len(),
            e.nrows()
        )));
    }
    if !(lambda > 0.0 && kappa > 0.0) {
        return Err(Error::config("lambda and kappa must be positive"));
    }
    let n = e.ncols();

    // direct path: smooth part 1/2||Ec-b||^2 + kappa||c||^2
    let l = spectral_norm(e).powi(2) + 2.0 * kappa;
    let mut x: Array1<f64> = Array1::zeros(n);
    let obj = |c: &Array1<f64>| -> f64 {
        let fit = &e.dot(c) - b;
        0.5 * fit.dot(&fit) + lambda * c.iter().map(|v| v.abs()).sum::<f64>() + kappa * c.dot(c)
    };
    let grad = |c: &Array1<f64>| -> Array1<f64> { e.t().dot(&(&e.dot(c) - b)) + 2.0 * kappa * c };
    let mut fx = obj(&x);
    let mut y = x.clone();
    let mut t = 1.0_f64;
    let mut iterations = 0;
    let mut rel_change = f64::INFINITY;
    let mut converged = false;
    while iterations < maxit {
        iterations += 1;
        let step = |v: &Array1<f64>| -> Array1<f64> {
            let g = grad(v);
            Array1::from_shape_fn(n, |j| soft_real(v[j] - g[j] / l, lambda / l))
        };
        let mut z = step(&y);
        let mut fz = obj(&z);
        if fz > fx {
            t = 1.0;
            z = step(&x);
            fz = obj(&z);
        }
        let diff = &z - &x;
        rel_change = diff.dot(&diff).sqrt() / (1.0 + z.dot(&z).sqrt());
        let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
        y = &z + &(diff.mapv(|v| v * (t - 1.0) / t_next));
        x = z;
        fx = fz;
        t = t_next;
        if rel_change < tol {
            converged = true;
            break;
        }
    }
    let direct = SolveResult {
        coeffs: x,
        objective: fx,
        iterations,
        rel_change,
        converged,
    };

    let reduced = elastic_net_as_balanced(e, b, lambda, kappa)?;
    let via_balanced = solve_balanced(&reduced, tol, maxit);
    let path_gap = direct
        .coeffs
        .iter()
        .zip(via_balanced.coeffs.iter())
        .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));

    Ok(ElasticNetSolve {
        direct,
        via_balanced,
        path_gap,
    })
}

/// Orthonormalize the rows of a matrix in place (modified Gram-Schmidt);
/// the result satisfies `D D' = I`, i.e. it is a tight frame.
pub fn orthonormalize_rows(a: &mut Array2<f64>) {
    let d = a.nrows();
    for i in 0..d {
        for k in 0..i {
            let proj = {
                let (ri, rk) = (a.row(i), a.row(k));
                ri.dot(&rk)
            };
            let rk = a.row(k).to_owned();
            let mut ri = a.row_mut(i);
            ri.zip_mut_with(&rk, |x, &y| *x -= proj * y);
        }
        let norm = a.row(i).dot(&a.row(i)).sqrt();
        debug_assert!(norm > 1e-12, "degenerate row during orthonormalization");
        a.row_mut(i).mapv_inplace(|x| x / norm);
    }
}

/// Random verification instance: dimensions up to 12 x 36, kappa in
/// `{0.1, 0.5, 2}`, uniform or non-uniform weights, tight or non-tight
/// frame, and a 0/1 diagonal observation (at least one observed row).
pub fn random_instance(seed: u64) -> BalancedProblem {
    let mut rng = StreamRng::new(seed);
    let d = 2 + rng.next_below(11) as usize; // 2..=12
    let n = d + rng.next_below((36 - d + 1) as u64) as usize; // d..=36
    let kappa = [0.1, 0.5, 2.0][rng.next_below(3) as usize];
    let tight = rng.next_uniform() < 0.5;
    let nonuniform = rng.next_uniform() < 0.5;

    let mut frame = Array2::from_shape_fn((d, n), |_| rng.next_gaussian());
    if tight {
        orthonormalize_rows(&mut frame);
    } else {
        frame.mapv_inplace(|v| v / (n as f64).sqrt());
    }

    let mut obs = Array2::zeros((d, d));
    let mut any = false;
    for i in 0..d {
        if rng.next_uniform() < 0.7 {
            obs[[i, i]] = 1.0;
            any = true;
        }
    }
    if !any {
        obs[[0, 0]] = 1.0;
    }

    let data = Array1::from_shape_fn(d, |_| 3.0 * rng.next_gaussian());
    let base = rng.next_range(0.05, 0.45);
    let weights = if nonuniform {
        Array1::from_shape_fn(n, |_| base * rng.next_range(0.5, 1.5))
    } else {
        Array1::from_elem(n, base)
    };
    BalancedProblem::new(frame, obs, data, weights, kappa).expect("generated dims are valid")
}
