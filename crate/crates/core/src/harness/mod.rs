//! Image/mask IO, reproducible noise and masks, metrics, fixtures, and the
//! experiment driver.

pub mod experiment;
pub mod fixtures;
pub mod metrics;
pub mod pgm;
pub mod rng;

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::inpaint::Mask;

pub use experiment::{
    run_experiment, run_experiment_in_memory, Algorithm, ExperimentReport, ExperimentSpec,
    MaskSource,
};
pub use fixtures::{synthetic_image, Fixture};
pub use metrics::{psnr, psnr_grids};
pub use pgm::{load_mask_pgm, load_pgm, save_mask_pgm, save_pgm, Image};
pub use rng::{CounterRng, StreamRng};

/// Each pixel is independently missing with probability `rate`; pixel
/// `(row, col)` consumes counter `row * width + col` of the pinned
/// counter-based generator, so masks are identical across platforms.
pub fn gen_random_mask(width: usize, height: usize, rate: f64, seed: u64) -> Result<Mask> {
    if !(rate > 0.0 && rate < 1.0) {
        return Err(Error::config(format!(
            "missing rate must lie in (0, 1), got {rate}"
        )));
    }
    let rng = CounterRng::new(seed);
    let observed = Array2::from_shape_fn((height, width), |(i, j)| {
        rng.uniform_at((i * width + j) as u64) >= rate
    });
    Mask::new(observed).map_err(|_| {
        Error::config(format!(
            "mask degenerated to all-missing at rate {rate}; try another seed"
        ))
    })
}

/// Add zero-mean Gaussian noise of deviation `sigma`; pixel `(row, col)`
/// uses the Box-Muller pair at counters `2p`, `2p + 1` with
/// `p = row * width + col`. `sigma = 0` returns the input bit-exactly;
/// no clamping is applied.
pub fn add_gaussian_noise(image: &pgm::Image, sigma: f64, seed: u64) -> Result<pgm::Image> {
    if sigma < 0.0 {
        return Err(Error::config("sigma must be nonnegative"));
    }
    if sigma == 0.0 {
        return Ok(image.clone());
    }
    let rng = CounterRng::new(seed);
    let width = image.width();
    let noisy = Array2::from_shape_fn(image.pixels.dim(), |(i, j)| {
        image.pixels[[i, j]] + sigma * rng.gaussian_at((i * width + j) as u64)
    });
    pgm::Image::new(noisy)
}
