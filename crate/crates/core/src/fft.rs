//! Thin 2D FFT helpers over `ndarray` grids, backed by rustfft.
//!
//! Forward transforms are unnormalized; the inverse divides by the grid
//! size so that `ifft2(fft2(x)) == x`.

use std::cell::RefCell;
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(len: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| p.borrow_mut().plan_fft(len, direction))
}

fn transform_rows(grid: &mut Array2<Complex64>, direction: FftDirection) {
    let cols = grid.ncols();
    let fft = plan(cols, direction);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let data = grid
        .as_slice_mut()
        .expect("grid must be in standard layout");
    for row in data.chunks_exact_mut(cols) {
        fft.process_with_scratch(row, &mut scratch);
    }
}

fn transform2(grid: &mut Array2<Complex64>, direction: FftDirection) {
    transform_rows(grid, direction);
    let mut t = Array2::default((grid.ncols(), grid.nrows()));
    t.assign(&grid.t());
    transform_rows(&mut t, direction);
    grid.assign(&t.t());
}

/// In-place forward 2D DFT (unnormalized).
pub fn fft2(grid: &mut Array2<Complex64>) {
    transform2(grid, FftDirection::Forward);
}

/// In-place inverse 2D DFT, normalized by `1/(rows*cols)`.
pub fn ifft2(grid: &mut Array2<Complex64>) {
    transform2(grid, FftDirection::Inverse);
    let scale = 1.0 / (grid.nrows() * grid.ncols()) as f64;
    grid.mapv_inplace(|v| v * scale);
}

/// Complex copy of a real grid.
pub fn to_complex(grid: &ndarray::ArrayView2<f64>) -> Array2<Complex64> {
    grid.mapv(|v| Complex64::new(v, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    #[test]
    fn roundtrip_identity() {
        let n = 16;
        let orig = Array2::from_shape_fn((n, n), |(i, j)| {
            Complex64::new((i * 31 + j * 7) as f64 % 13.0, (i + 2 * j) as f64 % 5.0)
        });
        let mut grid = orig.clone();
        fft2(&mut grid);
        ifft2(&mut grid);
        for (a, b) in grid.iter().zip(orig.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn dc_bin_is_sum() {
        let grid_re = Array2::from_elem((8, 8), 3.0);
        let mut grid = to_complex(&grid_re.view());
        fft2(&mut grid);
        assert!((grid[[0, 0]].re - 3.0 * 64.0).abs() < 1e-12);
        assert!(grid[[0, 1]].norm() < 1e-12);
    }
}
