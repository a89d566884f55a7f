//! Inverse scaled FFT.
//!
//! Evaluates `w[m] = Σ_k v[k]·exp(j2π(a·k + b)·m/n)` for `m = 0..n` by the
//! chirp decomposition `a·k·m = a/2·(k² + m² − (k − m)²)`: a pre-chirp, one
//! fast convolution with a chirp of length `2n − 1` and a post-chirp. The
//! convolution is padded to the next power of two.

use std::f64::consts::PI;
use std::sync::Arc;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Scaled and shifted output grid of an inverse transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAxis {
    /// Dimensionless frequency scale `a`.
    pub scale: f64,
    /// Frequency shift in axis units.
    pub shift: f64,
    pub n: usize,
    /// Axis unit per bin.
    pub step: f64,
}

impl ScaledAxis {
    /// Axis whose shift is given directly in bins.
    pub fn bins(scale: f64, shift_bins: f64, n: usize) -> Self {
        Self { scale, shift: shift_bins, n, step: 1.0 }
    }

    pub fn identity(n: usize) -> Self {
        Self::bins(1.0, 0.0, n)
    }

    pub fn shift_bins(&self) -> f64 {
        self.shift / self.step
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0) || !self.scale.is_finite() {
            return Err(Error::InvalidScale(self.scale));
        }
        if self.n < 2 {
            return Err(Error::InvalidParameter(format!("scaled axis needs n >= 2, got {}", self.n)));
        }
        if !self.shift_bins().is_finite() {
            return Err(Error::InvalidParameter("non-finite shift".into()));
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn cis_cycles(cycles: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * cycles.rem_euclid(1.0))
}

/// Reusable plan for transforms of length `n`.
pub struct ScaledIdftPlan {
    n: usize,
    padded: usize,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl ScaledIdftPlan {
    pub fn new(n: usize) -> Self {
        let padded = (2 * n.max(1) - 1).next_power_of_two();
        let mut planner = FftPlanner::new();
        Self { n, padded, fwd: planner.plan_fft_forward(padded), inv: planner.plan_fft_inverse(padded) }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn apply(&self, v: &[Complex64], axis: &ScaledAxis) -> Result<Vec<Complex64>> {
        axis.validate()?;
        if v.len() != self.n || axis.n != self.n {
            return Err(Error::InvalidParameter(format!(
                "length mismatch: plan {}, input {}, axis {}",
                self.n,
                v.len(),
                axis.n
            )));
        }
        let n = self.n;
        let nf = n as f64;
        let a = axis.scale;
        // half-chirp exp(jπ a j²/n) expressed in cycles: a j² / (2n)
        let half = |j: usize| a * ((j * j) as f64) / (2.0 * nf);

        let mut x = vec![Complex64::new(0.0, 0.0); self.padded];
        for (k, (xk, vk)) in x.iter_mut().zip(v).enumerate() {
            *xk = vk * cis_cycles(half(k));
        }
        let mut h = vec![Complex64::new(0.0, 0.0); self.padded];
        h[0] = Complex64::new(1.0, 0.0);
        for j in 1..n {
            let c = cis_cycles(-half(j));
            h[j] = c;
            h[self.padded - j] = c;
        }
        self.fwd.process(&mut x);
        self.fwd.process(&mut h);
        x.iter_mut().zip(&h).for_each(|(a, b)| *a *= b);
        self.inv.process(&mut x);

        let b = axis.shift_bins();
        let scale = 1.0 / self.padded as f64;
        Ok((0..n)
            .map(|m| x[m] * scale * cis_cycles(half(m)) * cis_cycles(b * m as f64 / nf))
            .collect())
    }
}

/// Inverse DFT evaluated on a scaled, shifted frequency grid (no `1/n`).
pub fn scaled_idft(v: &[Complex64], axis: &ScaledAxis) -> Result<Vec<Complex64>> {
    ScaledIdftPlan::new(v.len()).apply(v, axis)
}

/// Two-stage scaled inverse transform of a `[rows × cols]` grid.
///
/// Stage one transforms each row with its own axis (`row_axis(i)`), stage
/// two each column with `col_axis(j)`. Column axes are expected to share a
/// scale and may differ in shift.
pub fn scaled_idft_2d<R, C>(grid: &Array2<Complex64>, row_axis: R, col_axis: C) -> Result<Array2<Complex64>>
where
    R: Fn(usize) -> ScaledAxis + Sync,
    C: Fn(usize) -> ScaledAxis + Sync,
{
    let (rows, cols) = grid.dim();
    let mut out = grid.as_standard_layout().into_owned();
    let row_plan = ScaledIdftPlan::new(cols);
    out.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .try_for_each(|(i, mut row)| -> Result<()> {
            let res = row_plan.apply(&row.to_vec(), &row_axis(i))?;
            row.iter_mut().zip(res).for_each(|(d, s)| *d = s);
            Ok(())
        })?;
    let mut t = out.t().as_standard_layout().into_owned();
    let col_plan = ScaledIdftPlan::new(rows);
    t.axis_iter_mut(Axis(0))
        .into_par_iter()
        .enumerate()
        .try_for_each(|(j, mut col)| -> Result<()> {
            let res = col_plan.apply(&col.to_vec(), &col_axis(j))?;
            col.iter_mut().zip(res).for_each(|(d, s)| *d = s);
            Ok(())
        })?;
    out.assign(&t.t());
    Ok(out)
}
