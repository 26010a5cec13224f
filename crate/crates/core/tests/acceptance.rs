//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Criterion 6 uses the standard 256x256 greyscale test images when they
//! are supplied (see README: `assets/standard/` or `TPCTF_STD_IMAGES`);
//! otherwise it falls back to regression PSNRs of the shipped synthetic
//! fixtures, frozen at first build.

use std::path::PathBuf;
use std::time::Instant;

use ndarray::Array2;
use num_complex::Complex64;

use tpctf::balanced::{random_instance, solve_elastic_net, verify_grouping};
use tpctf::filterbank::{sample_bank, tpctf6_bank, verify_bank_identities, BandId, FilterId};
use tpctf::harness::fixtures::{synthetic_image, Fixture};
use tpctf::harness::rng::StreamRng;
use tpctf::harness::{gen_random_mask, run_experiment_in_memory};
use tpctf::harness::{Algorithm, ExperimentSpec, MaskSource};
use tpctf::inpaint::make_schedule;
use tpctf::shrinkage::{bivariate_shrink, ShrinkContext};
use tpctf::transform::{
    filter_l2_norm, forward, inverse, real_analysis_matrix, TransformSpec,
};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion} ({name}): {} -- {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

#[test]
fn criterion_1_tight_framelet_identities() {
    let start = Instant::now();
    let bank = tpctf6_bank();
    let mut worst = 0.0_f64;
    for n in [16usize, 64, 256] {
        let sampled = sample_bank(&bank, n, 0).unwrap();
        let r = verify_bank_identities(&sampled);
        worst = worst.max(r.max_deviation());
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        1,
        "tight-framelet identities",
        worst <= 1e-12 && secs < 1.0,
        &format!("max deviation {worst:.3e} over n in {{16, 64, 256}}, {secs:.2}s"),
    );
}

#[test]
fn criterion_2_perfect_reconstruction_and_isometry() {
    let start = Instant::now();
    let mut rng = StreamRng::new(2024);
    let mut worst_sup = 0.0_f64;
    let mut worst_iso = 0.0_f64;
    for i in 0..100 {
        let n = [32usize, 64, 128][i % 3];
        let max_l = TransformSpec::max_levels(n);
        let levels = 1 + (i as u32 / 3) % max_l;
        let spec = TransformSpec::tpctf6(levels);
        let image = Array2::from_shape_fn((n, n), |_| rng.next_range(0.0, 255.0));
        let pyr = forward(&image, &spec).unwrap();
        let back = inverse(&pyr, &spec).unwrap();
        let sup_x = image.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let sup = image
            .iter()
            .zip(back.iter())
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        let energy: f64 = image.iter().map(|v| v * v).sum();
        worst_sup = worst_sup.max(sup / sup_x);
        worst_iso = worst_iso.max((pyr.energy() / energy - 1.0).abs());
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        2,
        "perfect reconstruction + isometry",
        worst_sup <= 1e-10 && worst_iso <= 1e-10 && secs < 30.0,
        &format!(
            "100 images: sup-error {worst_sup:.3e}, energy deviation {worst_iso:.3e}, {secs:.1}s"
        ),
    );
}

#[test]
fn criterion_3_redundancy_accounting() {
    let n = 128usize;
    let d = n * n;
    let bound = 32.0 / 3.0;
    let mut rng = StreamRng::new(3);
    let image = Array2::from_shape_fn((n, n), |_| rng.next_range(0.0, 255.0));
    let mut rates = Vec::new();
    for levels in 1..=4u32 {
        let spec = TransformSpec::tpctf6(levels);
        let pyr = forward(&image, &spec).unwrap();
        let dof = pyr.real_dof_after_conjugate_reduction();
        // exact count: 32 d sum_{j<=L} 4^-j + d 4^-L
        let expected: usize = (1..=levels).map(|j| 32 * d / 4usize.pow(j)).sum::<usize>()
            + d / 4usize.pow(levels);
        assert_eq!(dof, expected, "exact count at {levels} levels");
        rates.push(dof as f64 / d as f64);
    }
    let within = rates.iter().all(|&r| r <= bound);
    let increasing = rates.windows(2).all(|w| w[1] > w[0]);
    let approaching = (bound - rates[3]) < (bound - rates[0]) && (bound - rates[3]) < 0.05;
    report(
        3,
        "redundancy accounting",
        within && increasing && approaching,
        &format!("rates per level {rates:?} vs bound {bound:.4}"),
    );
}

#[test]
fn criterion_4_small_instance_frame_oracle() {
    let spec = TransformSpec::tpctf6(1);
    let a = real_analysis_matrix(&spec, 16).unwrap();
    // D D' = A' A for the real synthesis matrix D = A'
    let gram = a.t().dot(&a);
    let mut worst = 0.0_f64;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((gram[[i, j]] - want).abs());
        }
    }
    report(
        4,
        "16x16 synthesis-matrix oracle",
        worst <= 1e-9,
        &format!("max |DD' - I| = {worst:.3e}"),
    );
}

#[test]
fn criterion_5_grouping_effect() {
    let start = Instant::now();
    let mut worst_kkt = 0.0_f64;
    let mut violations = 0usize;
    let mut tight_seen = 0usize;
    let mut nonuniform_seen = 0usize;
    let mut kappas = std::collections::BTreeSet::new();
    for seed in 0..200u64 {
        let problem = random_instance(seed);
        let (d, n) = problem.dims();
        assert!(d <= 12 && n <= 36);
        kappas.insert(format!("{}", problem.kappa));
        let gram = problem.frame.dot(&problem.frame.t());
        let tight = (0..d).all(|i| {
            (0..d).all(|j| (gram[[i, j]] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-9)
        });
        if tight {
            tight_seen += 1;
        }
        let w0 = problem.weights[0];
        if problem.weights.iter().any(|&w| (w - w0).abs() > 1e-12) {
            nonuniform_seen += 1;
        }
        let r = verify_grouping(&problem, 1e-12, 200_000);
        assert!(r.solve.converged, "seed {seed} did not converge");
        assert!(r.fidelity_ok && r.l1_ok, "loose bounds failed at seed {seed}");
        violations += r.violations;
        worst_kkt = worst_kkt.max(r.kkt);
    }
    // elastic-net dual-path agreement
    let mut worst_gap = 0.0_f64;
    for seed in 0..30u64 {
        let mut rng = StreamRng::new(1000 + seed);
        let e = Array2::from_shape_fn((6, 10), |_| rng.next_gaussian());
        let b = ndarray::Array1::from_shape_fn(6, |_| 2.0 * rng.next_gaussian());
        let lambda = rng.next_range(0.05, 0.5);
        let kappa = [0.1, 0.5, 2.0][rng.next_below(3) as usize];
        let s = solve_elastic_net(&e, &b, lambda, kappa, 1e-13, 400_000).unwrap();
        assert!(s.direct.converged && s.via_balanced.converged);
        worst_gap = worst_gap.max(s.path_gap);
    }
    let secs = start.elapsed().as_secs_f64();
    let corpus_ok = (40..=160).contains(&tight_seen)
        && nonuniform_seen >= 40
        && kappas.len() == 3;
    report(
        5,
        "grouping effect",
        violations == 0 && worst_kkt <= 1e-6 && worst_gap <= 1e-8 && corpus_ok && secs < 60.0,
        &format!(
            "200 instances ({tight_seen} tight, {nonuniform_seen} non-uniform, kappas {kappas:?}): \
             0 expected violations, got {violations}; kkt {worst_kkt:.3e}; \
             elastic path gap {worst_gap:.3e}; {secs:.1}s"
        ),
    );
}

struct PsnrCase {
    label: &'static str,
    rate: f64,
    mask_seed: u64,
    sigma: f64,
    noise_seed: u64,
    expect_db: f64,
    tol_db: f64,
}

fn run_psnr_case(image: &tpctf::harness::Image, label: &str, case: &PsnrCase) -> (f64, f64) {
    let mask = gen_random_mask(image.width(), image.height(), case.rate, case.mask_seed).unwrap();
    let spec = ExperimentSpec {
        image: PathBuf::from(label),
        mask: MaskSource::Random {
            rate: case.rate,
            seed: case.mask_seed,
        },
        sigma: case.sigma,
        noise_seed: case.noise_seed,
        algorithm: Algorithm::Tpctf6,
        levels: None,
        paste_observed: false,
        out: None,
    };
    let report = run_experiment_in_memory(&spec, image, &mask).unwrap();
    (report.psnr_db, report.seconds)
}

fn standard_image_dir() -> Option<PathBuf> {
    if let Ok(dir) = std::env::var("TPCTF_STD_IMAGES") {
        let p = PathBuf::from(dir);
        if p.is_dir() {
            return Some(p);
        }
    }
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets/standard");
    if p.is_dir() {
        Some(p)
    } else {
        None
    }
}

#[test]
fn criterion_6_psnr_reproduction() {
    let start = Instant::now();
    if let Some(dir) = standard_image_dir() {
        let lena = dir.join("lena256.pgm");
        let barbara = dir.join("barbara256.pgm");
        if lena.is_file() && barbara.is_file() {
            let lena = tpctf::harness::load_pgm(&lena).unwrap();
            let barbara = tpctf::harness::load_pgm(&barbara).unwrap();
            let cases: [(&tpctf::harness::Image, &str, PsnrCase); 4] = [
                (
                    &lena,
                    "lena256",
                    PsnrCase {
                        label: "lena 50% sigma 0",
                        rate: 0.5,
                        mask_seed: 1,
                        sigma: 0.0,
                        noise_seed: 0,
                        expect_db: 33.60,
                        tol_db: 1.5,
                    },
                ),
                (
                    &lena,
                    "lena256",
                    PsnrCase {
                        label: "lena 80% sigma 0",
                        rate: 0.8,
                        mask_seed: 1,
                        sigma: 0.0,
                        noise_seed: 0,
                        expect_db: 28.15,
                        tol_db: 1.5,
                    },
                ),
                (
                    &barbara,
                    "barbara256",
                    PsnrCase {
                        label: "barbara 50% sigma 0",
                        rate: 0.5,
                        mask_seed: 1,
                        sigma: 0.0,
                        noise_seed: 0,
                        expect_db: 36.25,
                        tol_db: 1.5,
                    },
                ),
                (
                    &lena,
                    "lena256",
                    PsnrCase {
                        label: "lena 50% sigma 10",
                        rate: 0.5,
                        mask_seed: 1,
                        sigma: 10.0,
                        noise_seed: 7,
                        expect_db: 30.40,
                        tol_db: 1.5,
                    },
                ),
            ];
            let mut all_ok = true;
            let mut lines = Vec::new();
            for (img, name, case) in &cases {
                let (psnr, secs) = run_psnr_case(img, name, case);
                let ok = (psnr - case.expect_db).abs() <= case.tol_db && secs <= 300.0;
                all_ok &= ok;
                lines.push(format!(
                    "{}: {psnr:.2} dB (expect {} +/- {}) in {secs:.0}s",
                    case.label, case.expect_db, case.tol_db
                ));
            }
            // reference row: the undecimated cubic spline baseline
            let mask = gen_random_mask(lena.width(), lena.height(), 0.5, 1).unwrap();
            let spec = ExperimentSpec {
                image: PathBuf::from("lena256"),
                mask: MaskSource::Random { rate: 0.5, seed: 1 },
                sigma: 0.0,
                noise_seed: 0,
                algorithm: Algorithm::SplineCubic,
                levels: None,
                paste_observed: false,
                out: None,
            };
            let baseline = run_experiment_in_memory(&spec, &lena, &mask).unwrap();
            let ok = (baseline.psnr_db - 31.39).abs() <= 2.0;
            all_ok &= ok;
            lines.push(format!(
                "spline-cubic lena 50% sigma 0: {:.2} dB (expect 31.39 +/- 2)",
                baseline.psnr_db
            ));
            report(6, "PSNR reproduction (standard images)", all_ok, &lines.join("; "));
            return;
        }
    }

    // fallback: regression PSNRs on the shipped synthetic fixtures,
    // frozen at first build (deterministic masks, noise, and algorithm)
    let cases = [
        (Fixture::Mixed, 0.5, 1u64, 0.0, 0u64, 25.2891, 0.05),
        (Fixture::Mixed, 0.5, 1, 10.0, 7, 24.0792, 0.05),
        (Fixture::Sinusoid, 0.8, 2, 0.0, 0, 58.5259, 0.05),
        (Fixture::Gradient, 0.5, 1, 0.0, 0, 48.4024, 0.05),
    ];
    let mut all_ok = true;
    let mut lines = Vec::new();
    for (fixture, rate, mask_seed, sigma, noise_seed, expect, tol) in cases {
        let image = synthetic_image(fixture, 256);
        let case = PsnrCase {
            label: fixture.name(),
            rate,
            mask_seed,
            sigma,
            noise_seed,
            expect_db: expect,
            tol_db: tol,
        };
        let (psnr, secs) = run_psnr_case(&image, fixture.name(), &case);
        let ok = (psnr - expect).abs() <= tol && secs <= 300.0;
        all_ok &= ok;
        lines.push(format!(
            "{} {}% sigma {}: {psnr:.4} dB (golden {expect:.4})",
            fixture.name(),
            (rate * 100.0) as u32,
            sigma
        ));
    }
    let secs = start.elapsed().as_secs_f64();
    report(
        6,
        "PSNR regression (synthetic goldens; standard images not supplied)",
        all_ok && secs < 1200.0,
        &lines.join("; "),
    );
}

#[test]
fn criterion_7_schedule_exactness() {
    let mut ok = true;
    let mut details = Vec::new();
    for (sigma, r) in [(0.0, 0.3), (0.0, 0.7), (25.0, 0.3), (25.0, 0.7), (0.0, 0.5)] {
        let s = make_schedule(sigma, r).unwrap();
        let n1 = s.lambda1.len();
        let n2 = s.lambda2.len();
        let e1 = (s.lambda1[0] - 512.0).abs();
        let e2 = (s.lambda1[n1 - 1] - s.lambda_mid).abs();
        let e3 = (s.lambda2[n2 - 1] - s.lambda_min).abs();
        let table_ok = if r < 0.5 {
            n1 == 5 && n2 == 8 && s.tol1 == 5e-3 && s.tol2 == 1e-4
        } else {
            n1 == 8 && n2 == 5 && s.tol1 == 5e-3 && s.tol2 == 1e-3
        };
        let this = e1 <= 1e-12 && e2 <= 1e-12 && e3 <= 1e-12 && table_ok;
        ok &= this;
        details.push(format!(
            "sigma={sigma} r={r}: endpoint errors ({e1:.1e}, {e2:.1e}, {e3:.1e}), table {}",
            if table_ok { "ok" } else { "WRONG" }
        ));
    }
    report(7, "schedule exactness", ok, &details.join("; "));
}

#[test]
fn criterion_8_shrinkage_unit_checks() {
    // worked example through the real bivariate path: sigma_n = 1 via
    // lambda = 1/||b||, c = 4 at (0,0), parent 3, window mean square 5
    let n = 32usize;
    let spec = TransformSpec::tpctf6(2);
    let band = BandId::new(FilterId::Ap, FilterId::Bp(1));
    let pos = spec.bank.highpass_position(&band).unwrap();
    let norm = filter_l2_norm(&spec, n, 1, &band).unwrap();
    let lambda = 1.0 / norm;

    let mut pyr = forward(&Array2::zeros((n, n)), &spec).unwrap();
    let fill = (229.0_f64 / 48.0).sqrt(); // 49-cell window mean square = 5
    pyr.detail[0].bands[pos]
        .coeffs
        .fill(Complex64::new(fill, 0.0));
    pyr.detail[0].bands[pos].coeffs[[0, 0]] = Complex64::new(4.0, 0.0);
    pyr.detail[1].bands[pos].coeffs[[0, 0]] = Complex64::new(3.0, 0.0);
    let ctx = ShrinkContext::for_spec(&spec, n, lambda).unwrap();
    let out = bivariate_shrink(&pyr, &ctx);
    let got = out.detail[0].bands[pos].coeffs[[0, 0]].re;
    let example_ok = (got - 3.30718).abs() <= 1e-5;

    // nonexpansiveness over >= 1e5 random coefficients
    let mut rng = StreamRng::new(8);
    let image = Array2::from_shape_fn((128, 128), |_| rng.next_range(0.0, 255.0));
    let spec2 = TransformSpec::tpctf6(2);
    let pyr2 = forward(&image, &spec2).unwrap();
    let total: usize = pyr2
        .detail
        .iter()
        .map(|l| l.bands.iter().map(|b| b.coeffs.len()).sum::<usize>())
        .sum();
    let mut nonexpansive = total >= 100_000;
    for lambda in [0.3, 2.0, 9.0] {
        let ctx = ShrinkContext::for_spec(&spec2, 128, lambda).unwrap();
        let out = bivariate_shrink(&pyr2, &ctx);
        for (la, lb) in pyr2.detail.iter().zip(out.detail.iter()) {
            for (ba, bb) in la.bands.iter().zip(lb.bands.iter()) {
                for (a, b) in ba.coeffs.iter().zip(bb.coeffs.iter()) {
                    if b.norm() > a.norm() + 1e-15 {
                        nonexpansive = false;
                    }
                }
            }
        }
    }
    report(
        8,
        "shrinkage unit checks",
        example_ok && nonexpansive,
        &format!(
            "worked example gave {got:.5} (want 3.30718 +/- 1e-5); \
             nonexpansive over {total} coefficients x 3 thresholds: {nonexpansive}"
        ),
    );
}
