//! Frequency-domain bistatic focusing.
//!
//! Every processor follows the same outline: 2D spectrum, range matched
//! filter, multiplication by the conjugate reference spectrum of a block
//! center, then a range-direction scaled inverse transform whose scale and
//! shift depend on the Doppler frequency, followed by an azimuth-direction
//! scaled inverse transform. The processors differ only in how the phase
//! model of a block is obtained.

mod block;
mod gc;
mod mono;
mod tandem;
mod ti;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fft::{fft2, ifft2};
use crate::geometry::{doppler_window, ground_point, r0r_for_sum_range, ApertureSpec, BistaticGeometry, LookSide};
use crate::rawsim::{chirp_spectrum, RadarParams, RawDataGrid};
use crate::sfft::cis_cycles;
use crate::SPEED_OF_LIGHT;

pub use block::{BlockPlan, BlockRegression, BlockSpec, ScalingParams};
pub use gc::{focus_gc, GcOptions, DEFAULT_BLOCK_AZIMUTH, DEFAULT_BLOCK_RANGE};
pub use mono::focus_monostatic_mismatch;
pub use tandem::{focus_tandem, focus_tandem_unchecked, tandem_baseline};
pub use ti::{focus_ti, focus_ti_unchecked};

/// Spectrum of a raw grid, rows in ascending Doppler, columns in ascending
/// range frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumGrid {
    /// `[f_tau][f]`.
    pub samples: Array2<Complex64>,
    /// Baseband range frequencies, Hz, ascending.
    pub f_axis: Vec<f64>,
    /// Doppler frequencies unwrapped into `[fdc − prf/2, fdc + prf/2)`, ascending.
    pub f_tau_axis: Vec<f64>,
    pub fdc: f64,
    pub t0: f64,
    pub tau_start: f64,
    pub fs: f64,
    pub prf: f64,
}

/// Row index of the lowest unwrapped Doppler bin.
fn first_doppler_bin(fdc: f64, prf: f64, m: usize) -> i64 {
    let df = prf / m as f64;
    ((fdc - 0.5 * prf) / df).ceil() as i64
}

/// 2D transform with the fast- and slow-time origins moved to zero, so
/// that every cell is the continuous-time spectrum up to a constant gain.
pub fn to_spectrum(raw: &RawDataGrid, fdc: f64) -> SpectrumGrid {
    let (m, n) = raw.samples.dim();
    let mut g = raw.samples.as_standard_layout().into_owned();
    fft2(&mut g);
    let df = raw.fs / n as f64;
    let dft = raw.prf / m as f64;
    let k_lo = n.div_ceil(2);
    let l0 = first_doppler_bin(fdc, raw.prf, m);
    let f_axis: Vec<f64> = (0..n).map(|k| (k as f64 - (n - k_lo) as f64) * df).collect();
    let f_tau_axis: Vec<f64> = (0..m).map(|i| (l0 + i as i64) as f64 * dft).collect();
    let mut samples = Array2::zeros((m, n));
    samples.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(i, mut row)| {
        let src = (l0 + i as i64).rem_euclid(m as i64) as usize;
        let ramp_az = -f_tau_axis[i] * raw.tau_start;
        for (k, d) in row.iter_mut().enumerate() {
            let col = (k + k_lo) % n;
            *d = g[(src, col)] * cis_cycles(ramp_az - f_axis[k] * raw.t0);
        }
    });
    SpectrumGrid { samples, f_axis, f_tau_axis, fdc, t0: raw.t0, tau_start: raw.tau_start, fs: raw.fs, prf: raw.prf }
}

/// Inverse of [`to_spectrum`].
pub fn from_spectrum(spec: &SpectrumGrid) -> RawDataGrid {
    let (m, n) = spec.samples.dim();
    let k_lo = n.div_ceil(2);
    let l0 = first_doppler_bin(spec.fdc, spec.prf, m);
    let mut g = Array2::zeros((m, n));
    for i in 0..m {
        let dst = (l0 + i as i64).rem_euclid(m as i64) as usize;
        let ramp_az = spec.f_tau_axis[i] * spec.tau_start;
        for k in 0..n {
            let col = (k + k_lo) % n;
            g[(dst, col)] = spec.samples[(i, k)] * cis_cycles(ramp_az + spec.f_axis[k] * spec.t0);
        }
    }
    ifft2(&mut g);
    RawDataGrid { samples: g, t0: spec.t0, tau_start: spec.tau_start, fs: spec.fs, prf: spec.prf }
}

/// Range matched filter: conjugate chirp spectrum, cells outside the
/// transmitted band set to zero.
pub fn range_matched_filter(spec: &mut SpectrumGrid, radar: &RadarParams) {
    let n = spec.f_axis.len();
    let k_lo = n.div_ceil(2);
    let chirp = chirp_spectrum(radar, n);
    let filt: Vec<Complex64> = (0..n)
        .map(|k| {
            if spec.f_axis[k].abs() > 0.5 * radar.bandwidth {
                Complex64::new(0.0, 0.0)
            } else {
                chirp[(k + k_lo) % n].conj() / n as f64
            }
        })
        .collect();
    spec.samples.axis_iter_mut(Axis(0)).into_par_iter().for_each(|mut row| {
        row.iter_mut().zip(&filt).for_each(|(x, h)| *x *= h);
    });
}

/// Everything besides the raw data a processor needs to know.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FocusContext {
    pub geom: BistaticGeometry,
    pub radar: RadarParams,
    pub aperture: ApertureSpec,
    pub side: LookSide,
}

/// Output grid of a processor in receiver coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutputGrid {
    /// `R0R` of the first range cell, m.
    pub range_start: f64,
    pub range_spacing: f64,
    pub n_range: usize,
    /// `τ0R` of the first azimuth cell, s.
    pub tau_start: f64,
    pub tau_spacing: f64,
    pub n_azimuth: usize,
}

impl OutputGrid {
    pub fn range_at(&self, m: f64) -> f64 {
        self.range_start + m * self.range_spacing
    }

    pub fn tau_at(&self, j: f64) -> f64 {
        self.tau_start + j * self.tau_spacing
    }

    /// Fractional `(azimuth, range)` cell of a receiver coordinate.
    pub fn cell_of(&self, r0r: f64, tau0r: f64) -> (f64, f64) {
        ((tau0r - self.tau_start) / self.tau_spacing, (r0r - self.range_start) / self.range_spacing)
    }

    pub fn center(&self) -> (f64, f64) {
        (self.range_at(0.5 * self.n_range as f64), self.tau_at(0.5 * self.n_azimuth as f64))
    }
}

/// Output grid of the frequency-domain processors: the raw pulse times in
/// azimuth and `c/(2 fs)` in range, starting where the bistatic sum range
/// equals the receive-window start at mid-aperture. The azimuth axis is
/// moved back by the whole number of pulses separating a mid-scene
/// target's composite beam center from its receiver closest approach, so
/// squinted and trailing-transmitter scenes land inside the cyclic image.
pub fn output_grid(raw: &RawDataGrid, ctx: &FocusContext) -> Result<OutputGrid> {
    let tau_mid = raw.tau_start + 0.5 * raw.n_azimuth() as f64 / raw.prf;
    let range_start = r0r_for_sum_range(&ctx.geom, ctx.side, tau_mid, SPEED_OF_LIGHT * raw.t0)?;
    let range_spacing = SPEED_OF_LIGHT / (2.0 * raw.fs);
    let r_mid = range_start + 0.5 * raw.n_range() as f64 * range_spacing;
    let offset = ground_point(&ctx.geom.rx, ctx.side, r_mid, tau_mid)
        .and_then(|p| doppler_window(&ctx.geom, p, ctx.radar.f0, &ctx.aperture))
        .map(|w| ((w.tau_cb - tau_mid) * raw.prf).round())
        .unwrap_or(0.0);
    Ok(OutputGrid {
        range_start,
        range_spacing,
        n_range: raw.n_range(),
        tau_start: raw.tau_start - offset / raw.prf,
        tau_spacing: 1.0 / raw.prf,
        n_azimuth: raw.n_azimuth(),
    })
}

/// Doppler centroid of the scene center, used to unwrap the Doppler axis.
pub fn scene_doppler_centroid(grid: &OutputGrid, ctx: &FocusContext) -> Result<f64> {
    let (r, tau) = grid.center();
    let p = ground_point(&ctx.geom.rx, ctx.side, r, tau)?;
    Ok(doppler_window(&ctx.geom, p, ctx.radar.f0, &ctx.aperture)?.fdc)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FocusDiagnostics {
    /// Spectrum cells without a stationary point, zeroed (per block).
    pub outside_support: usize,
    pub fdc: f64,
    pub blocks: Vec<BlockPlan>,
}

/// Focused image in receiver coordinates, `[azimuth][range]`.
#[derive(Debug, Clone, PartialEq)]
pub struct FocusedImage {
    pub samples: Array2<Complex64>,
    pub grid: OutputGrid,
    /// Receiver speed converting azimuth time to meters.
    pub az_speed: f64,
    pub processor: String,
    pub diagnostics: FocusDiagnostics,
}

impl FocusedImage {
    pub fn range_at(&self, m: f64) -> f64 {
        self.grid.range_at(m)
    }

    pub fn tau_at(&self, j: f64) -> f64 {
        self.grid.tau_at(j)
    }

    pub fn az_meters(&self, j: f64) -> f64 {
        self.tau_at(j) * self.az_speed
    }

    pub fn range_cell(&self) -> f64 {
        self.grid.range_spacing
    }

    pub fn az_cell_meters(&self) -> f64 {
        self.grid.tau_spacing * self.az_speed
    }

    pub fn magnitude(&self) -> Array2<f64> {
        self.samples.mapv(|z| z.norm())
    }
}
