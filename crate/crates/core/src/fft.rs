//! Thin helpers around `rustfft` for row/column transforms of 2D grids.

use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

pub fn plan(n: usize, dir: Direction) -> Arc<dyn Fft<f64>> {
    let mut planner = FftPlanner::new();
    match dir {
        Direction::Forward => planner.plan_fft_forward(n),
        Direction::Inverse => planner.plan_fft_inverse(n),
    }
}

/// Unnormalized in-place transform of a slice.
pub fn fft_inplace(data: &mut [Complex64], dir: Direction) {
    plan(data.len(), dir).process(data);
}

/// Inverse transform normalized by `1/n`.
pub fn ifft_normalized(data: &mut [Complex64]) {
    let n = data.len() as f64;
    fft_inplace(data, Direction::Inverse);
    data.iter_mut().for_each(|x| *x /= n);
}

/// Transform every row (axis 1) of a standard-layout grid.
pub fn fft_rows(grid: &mut Array2<Complex64>, dir: Direction) {
    let fft = plan(grid.ncols(), dir);
    grid.axis_iter_mut(Axis(0)).into_par_iter().for_each(|mut row| {
        if let Some(s) = row.as_slice_mut() {
            fft.process(s);
        } else {
            let mut buf = row.to_vec();
            fft.process(&mut buf);
            row.iter_mut().zip(buf).for_each(|(d, s)| *d = s);
        }
    });
}

/// Transform every column (axis 0).
pub fn fft_cols(grid: &mut Array2<Complex64>, dir: Direction) {
    let mut t = grid.t().as_standard_layout().into_owned();
    fft_rows(&mut t, dir);
    grid.assign(&t.t());
}

pub fn fft2(grid: &mut Array2<Complex64>) {
    fft_rows(grid, Direction::Forward);
    fft_cols(grid, Direction::Forward);
}

/// Inverse 2D transform, normalized so that `ifft2(fft2(x)) == x`.
pub fn ifft2(grid: &mut Array2<Complex64>) {
    fft_rows(grid, Direction::Inverse);
    fft_cols(grid, Direction::Inverse);
    let n = grid.len() as f64;
    grid.mapv_inplace(|x| x / n);
}

/// Signed DFT bin frequencies, `numpy.fft.fftfreq` ordering.
pub fn fftfreq(n: usize, spacing: f64) -> Vec<f64> {
    let df = 1.0 / (n as f64 * spacing);
    (0..n)
        .map(|k| {
            let k = if k < n.div_ceil(2) { k as i64 } else { k as i64 - n as i64 };
            k as f64 * df
        })
        .collect()
}
