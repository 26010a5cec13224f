//! Command-line interface: inpainting, mask/noise generation, PSNR, and
//! the numerical verification suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tpctf::balanced::{random_instance, verify_grouping};
use tpctf::filterbank::{
    build_dct_bank, build_spline_bank, sample_bank, tpctf6_bank, verify_bank_identities,
    SplineVariant,
};
use tpctf::harness::rng::StreamRng;
use tpctf::harness::{
    load_mask_pgm, load_pgm, psnr, run_experiment, save_mask_pgm, save_pgm, Algorithm,
    ExperimentSpec, Image, MaskSource,
};
use tpctf::inpaint::{inpaint, InpaintConfig};
use tpctf::transform::{forward, inverse, TransformSpec};

#[derive(Parser)]
#[command(
    name = "tpctf",
    about = "Directional complex tight framelet transforms and image inpainting",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Restore missing pixels of a PGM image.
    Inpaint(InpaintArgs),
    /// Generate a random missing-pixel mask.
    GenMask(GenMaskArgs),
    /// Add zero-mean Gaussian noise to an image.
    AddNoise(AddNoiseArgs),
    /// Peak signal-to-noise ratio between two images.
    Psnr(PsnrArgs),
    /// Numerical verification suites.
    Verify(VerifyArgs),
    /// Corrupt a clean image, inpaint it, and report PSNR.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct InpaintArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    mask: PathBuf,
    /// noise standard deviation assumed by the restoration
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// recorded in the output line; restoration itself is deterministic
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// decomposition levels (default: by image size)
    #[arg(long)]
    levels: Option<u32>,
    /// copy observed pixels into the output verbatim
    #[arg(long)]
    paste_observed: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenMaskArgs {
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    /// missing-pixel probability in (0, 1)
    #[arg(long)]
    rate: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AddNoiseArgs {
    #[arg(long)]
    image: PathBuf,
    #[arg(long)]
    sigma: f64,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PsnrArgs {
    #[arg(long = "ref")]
    reference: PathBuf,
    #[arg(long)]
    test: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(subcommand)]
    what: VerifyWhat,
}

#[derive(Subcommand)]
enum VerifyWhat {
    /// Tight-framelet identities of the built-in banks.
    Bank,
    /// Perfect reconstruction and isometry on random images.
    Transform {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: usize,
    },
    /// Grouping-effect and KKT checks on random balanced problems.
    Grouping {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Tpctf6,
    SplineCubic,
    SplineLinear,
    Dct,
}

#[derive(Args)]
struct ExperimentArgs {
    /// clean reference image (PGM)
    #[arg(long)]
    image: PathBuf,
    /// mask file; mutually exclusive with --rate
    #[arg(long, conflicts_with = "rate")]
    mask: Option<PathBuf>,
    /// random missing rate in (0, 1)
    #[arg(long)]
    rate: Option<f64>,
    /// seed for the random mask
    #[arg(long, default_value_t = 0)]
    mask_seed: u64,
    #[arg(long, default_value_t = 0.0)]
    sigma: f64,
    /// noise seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Tpctf6)]
    algorithm: AlgorithmArg,
    /// DCT block size when --algorithm dct
    #[arg(long, default_value_t = 7)]
    dct_block: u32,
    #[arg(long)]
    levels: Option<u32>,
    #[arg(long)]
    paste_observed: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn cmd_inpaint(args: &InpaintArgs) -> tpctf::Result<()> {
    let image = load_pgm(&args.image)?;
    let mask = load_mask_pgm(&args.mask)?;
    let config = InpaintConfig {
        sigma: args.sigma,
        levels: args.levels,
        paste_observed: args.paste_observed,
        ..InpaintConfig::default()
    };
    let outcome = inpaint(&image.pixels, &mask, &config)?;
    save_pgm(&Image::new(outcome.image)?, &args.out)?;
    println!(
        "{}\t{}\t{}\t{}\titerations={}\terror={:.3e}{}",
        args.image.display(),
        args.mask.display(),
        args.sigma,
        args.seed,
        outcome.iterations,
        outcome.final_error,
        outcome
            .warning
            .as_deref()
            .map(|w| format!("\twarning={w}"))
            .unwrap_or_default()
    );
    Ok(())
}

fn cmd_verify_bank() -> tpctf::Result<bool> {
    let mut ok = true;
    for n in [16usize, 64, 256] {
        let report = verify_bank_identities(&sample_bank(&tpctf6_bank(), n, 0)?);
        let pass = report.max_deviation() <= 1e-12;
        ok &= pass;
        println!(
            "bank tpctf6 {report} -> {}",
            if pass { "pass" } else { "FAIL" }
        );
    }
    for (name, bank) in [
        ("spline-cubic", build_spline_bank(SplineVariant::Cubic)),
        ("spline-linear", build_spline_bank(SplineVariant::Linear)),
    ] {
        let report = verify_bank_identities(&sample_bank(&bank, 64, 0)?);
        let pass = report.max_deviation() <= 1e-12;
        ok &= pass;
        println!("bank {name} {report} -> {}", if pass { "pass" } else { "FAIL" });
    }
    let report = verify_bank_identities(&sample_bank(&build_dct_bank(7)?, 64, 0)?);
    let pass = report.partition_only() <= 1e-12;
    ok &= pass;
    println!(
        "bank dct7 n={} partition={:.3e} -> {}",
        report.n,
        report.partition,
        if pass { "pass" } else { "FAIL" }
    );
    Ok(ok)
}

fn cmd_verify_transform(seed: u64, count: usize) -> tpctf::Result<bool> {
    let mut rng = StreamRng::new(seed);
    let mut ok = true;
    for i in 0..count {
        let n = [32usize, 64, 128][rng.next_below(3) as usize];
        let levels = 1 + rng.next_below(TransformSpec::max_levels(n) as u64) as u32;
        let spec = TransformSpec::tpctf6(levels);
        let image = ndarray::Array2::from_shape_fn((n, n), |_| rng.next_range(0.0, 255.0));
        let pyr = forward(&image, &spec)?;
        let back = inverse(&pyr, &spec)?;
        let sup_x = image.iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let sup = image
            .iter()
            .zip(back.iter())
            .fold(0.0_f64, |a, (x, y)| a.max((x - y).abs()));
        let energy: f64 = image.iter().map(|v| v * v).sum();
        let iso = (pyr.energy() / energy - 1.0).abs();
        let pass = sup <= 1e-10 * sup_x && iso <= 1e-10;
        ok &= pass;
        println!(
            "transform {i}: n={n} levels={levels} roundtrip={:.3e} isometry={:.3e} -> {}",
            sup / sup_x,
            iso,
            if pass { "pass" } else { "FAIL" }
        );
    }
    Ok(ok)
}

fn cmd_verify_grouping(seed: u64, count: usize) -> tpctf::Result<bool> {
    let mut ok = true;
    for i in 0..count {
        let instance_seed = seed + i as u64;
        let problem = random_instance(instance_seed);
        let (d, n) = problem.dims();
        let report = verify_grouping(&problem, 1e-12, 200_000);
        let pass = report.passed();
        ok &= pass;
        println!(
            "grouping seed={instance_seed} d={d} n={n} kappa={} kkt={:.3e} worst_margin={:.3e} \
             violations={} -> {}",
            problem.kappa,
            report.kkt,
            report.worst_margin,
            report.violations,
            if pass { "pass" } else { "FAIL" }
        );
    }
    Ok(ok)
}

fn cmd_experiment(args: &ExperimentArgs) -> tpctf::Result<()> {
    let mask = match (&args.mask, args.rate) {
        (Some(path), None) => MaskSource::File(path.clone()),
        (None, Some(rate)) => MaskSource::Random {
            rate,
            seed: args.mask_seed,
        },
        _ => {
            return Err(tpctf::Error::config(
                "exactly one of --mask or --rate is required",
            ))
        }
    };
    let algorithm = match args.algorithm {
        AlgorithmArg::Tpctf6 => Algorithm::Tpctf6,
        AlgorithmArg::SplineCubic => Algorithm::SplineCubic,
        AlgorithmArg::SplineLinear => Algorithm::SplineLinear,
        AlgorithmArg::Dct => Algorithm::Dct { m: args.dct_block },
    };
    let spec = ExperimentSpec {
        image: args.image.clone(),
        mask,
        sigma: args.sigma,
        noise_seed: args.seed,
        algorithm,
        levels: args.levels,
        paste_observed: args.paste_observed,
        out: args.out.clone(),
    };
    let report = run_experiment(&spec)?;
    println!("{}", report.line());
    if let Some(w) = &report.warning {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn run() -> tpctf::Result<bool> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Inpaint(args) => cmd_inpaint(args).map(|_| true),
        Command::GenMask(args) => {
            let mask =
                tpctf::harness::gen_random_mask(args.width, args.height, args.rate, args.seed)?;
            save_mask_pgm(&mask, &args.out)?;
            println!(
                "mask {}x{} rate={} seed={} missing={:.4}",
                args.width,
                args.height,
                args.rate,
                args.seed,
                mask.missing_ratio()
            );
            Ok(true)
        }
        Command::AddNoise(args) => {
            let image = load_pgm(&args.image)?;
            let noisy = tpctf::harness::add_gaussian_noise(&image, args.sigma, args.seed)?;
            save_pgm(&noisy, &args.out)?;
            Ok(true)
        }
        Command::Psnr(args) => {
            let reference = load_pgm(&args.reference)?;
            let test = load_pgm(&args.test)?;
            let value = psnr(&reference, &test)?;
            if value.is_infinite() {
                println!("inf");
            } else {
                println!("{value:.4}");
            }
            Ok(true)
        }
        Command::Verify(args) => match args.what {
            VerifyWhat::Bank => cmd_verify_bank(),
            VerifyWhat::Transform { seed, count } => cmd_verify_transform(seed, count),
            VerifyWhat::Grouping { seed, count } => cmd_verify_grouping(seed, count),
        },
        Command::Experiment(args) => cmd_experiment(args).map(|_| true),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: verification failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
