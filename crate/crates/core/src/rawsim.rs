//! Time-domain bistatic raw data simulation.
//!
//! Each pulse is evaluated under the stop-and-go approximation: the echo of
//! a target is the baseband chirp delayed by `(R_T(τ) + R_R(τ))/c` and
//! rotated by the carrier phase `−2π f0 τ_d`. The azimuth antenna pattern is
//! a rectangle covering the composite-beam interval of the target.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fft_inplace, plan, Direction};
use crate::geometry::{doppler_window, ApertureSpec, BistaticGeometry, DopplerWindow, PointTarget};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarParams {
    /// Carrier frequency, Hz.
    pub f0: f64,
    pub bandwidth: f64,
    pub pulse_duration: f64,
    pub prf: f64,
    /// Complex fast-time sampling rate, Hz.
    pub fs: f64,
    /// +1 for an up-chirp, -1 for a down-chirp.
    #[serde(default = "default_chirp_sign")]
    pub chirp_sign: f64,
    /// Amplitude envelope of the transmitted pulse.
    #[serde(default)]
    pub taper: Taper,
}

fn default_chirp_sign() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Taper {
    #[default]
    Rectangular,
    Hamming,
}

impl Taper {
    /// Envelope at `x = t / pulse_duration`, for `|x| <= 1/2`.
    pub fn weight(self, x: f64) -> f64 {
        match self {
            Taper::Rectangular => 1.0,
            Taper::Hamming => 0.54 + 0.46 * (2.0 * PI * x).cos(),
        }
    }
}

/// Fast-time oversampling used when only the bandwidth is known.
pub const DEFAULT_RANGE_OVERSAMPLING: f64 = 1.2;

impl RadarParams {
    pub fn with_oversampling(f0: f64, bandwidth: f64, pulse_duration: f64, prf: f64, oversampling: f64) -> Self {
        Self { f0, bandwidth, pulse_duration, prf, fs: oversampling * bandwidth, chirp_sign: 1.0, taper: Taper::Rectangular }
    }

    pub fn chirp_rate(&self) -> f64 {
        self.chirp_sign * self.bandwidth / self.pulse_duration
    }

    pub fn wavelength(&self) -> f64 {
        crate::SPEED_OF_LIGHT / self.f0
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.f0, self.bandwidth, self.pulse_duration, self.prf, self.fs]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0);
        if !finite {
            return Err(Error::InvalidParameter("radar parameters must be positive and finite".into()));
        }
        if self.fs < self.bandwidth {
            return Err(Error::InvalidParameter(format!(
                "sampling rate {} Hz below bandwidth {} Hz",
                self.fs, self.bandwidth
            )));
        }
        if self.pulse_duration * self.bandwidth < 1.0 {
            return Err(Error::InvalidParameter("time-bandwidth product below one".into()));
        }
        if self.chirp_sign != 1.0 && self.chirp_sign != -1.0 {
            return Err(Error::InvalidParameter("chirp_sign must be +1 or -1".into()));
        }
        Ok(())
    }
}

/// Fast-time × slow-time baseband samples, `[azimuth][range]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawDataGrid {
    pub samples: Array2<Complex64>,
    /// Fast time of the first range sample, s.
    pub t0: f64,
    /// Slow time of the first pulse, s.
    pub tau_start: f64,
    pub fs: f64,
    pub prf: f64,
}

impl RawDataGrid {
    pub fn n_azimuth(&self) -> usize {
        self.samples.nrows()
    }

    pub fn n_range(&self) -> usize {
        self.samples.ncols()
    }

    pub fn dt(&self) -> f64 {
        1.0 / self.fs
    }

    pub fn dtau(&self) -> f64 {
        1.0 / self.prf
    }

    pub fn fast_time(&self, n: usize) -> f64 {
        self.t0 + n as f64 / self.fs
    }

    pub fn slow_time(&self, m: usize) -> f64 {
        self.tau_start + m as f64 / self.prf
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub targets: Vec<PointTarget>,
}

/// Sampling grid of a simulation: receive window and pulse train.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationGrid {
    pub t0: f64,
    pub n_range: usize,
    pub tau_start: f64,
    pub n_azimuth: usize,
}

pub fn baseband_chirp(radar: &RadarParams, t: f64) -> Complex64 {
    if t.abs() > 0.5 * radar.pulse_duration {
        return Complex64::new(0.0, 0.0);
    }
    let cycles = 0.5 * radar.chirp_rate() * t * t;
    Complex64::from_polar(radar.taper.weight(t / radar.pulse_duration), 2.0 * PI * cycles.rem_euclid(1.0))
}

/// Chirp sampled on `n` fast-time bins with its center at bin 0 (negative
/// times wrapped to the end).
pub fn centered_chirp(radar: &RadarParams, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let k = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 };
            baseband_chirp(radar, k / radar.fs)
        })
        .collect()
}

/// DFT of the centered sampled chirp; its conjugate is the range matched filter.
pub fn chirp_spectrum(radar: &RadarParams, n: usize) -> Vec<Complex64> {
    let mut c = centered_chirp(radar, n);
    fft_inplace(&mut c, Direction::Forward);
    c
}

fn target_windows(
    geom: &BistaticGeometry,
    scene: &Scene,
    radar: &RadarParams,
    aperture: &ApertureSpec,
) -> Result<Vec<DopplerWindow>> {
    scene
        .targets
        .iter()
        .map(|t| doppler_window(geom, t.position, radar.f0, aperture))
        .collect()
}

fn sample_span(delay: f64, radar: &RadarParams, t0: f64) -> (i64, i64) {
    let half = 0.5 * radar.pulse_duration;
    let lo = ((delay - half - t0) * radar.fs).ceil() as i64;
    let hi = ((delay + half - t0) * radar.fs).floor() as i64;
    (lo, hi)
}

/// Receive window and pulse train covering every target echo, with one
/// pulse duration of fast-time margin on each side.
pub fn auto_grid(
    geom: &BistaticGeometry,
    scene: &Scene,
    radar: &RadarParams,
    aperture: &ApertureSpec,
) -> Result<SimulationGrid> {
    if scene.targets.is_empty() {
        return Err(Error::InvalidParameter("scene has no targets".into()));
    }
    let windows = target_windows(geom, scene, radar, aperture)?;
    let lo = windows.iter().map(|w| w.tau_cb - 0.5 * w.tau_span).fold(f64::INFINITY, f64::min);
    let hi = windows.iter().map(|w| w.tau_cb + 0.5 * w.tau_span).fold(f64::NEG_INFINITY, f64::max);
    let margin = 0.05 * (hi - lo);
    let m0 = ((lo - margin) * radar.prf).floor();
    let m1 = ((hi + margin) * radar.prf).ceil();
    let tau_start = m0 / radar.prf;
    let n_azimuth = round_up((m1 - m0) as usize + 1, 16);

    let mut dmin = f64::INFINITY;
    let mut dmax = f64::NEG_INFINITY;
    for (t, w) in scene.targets.iter().zip(&windows) {
        for m in 0..n_azimuth {
            let tau = tau_start + m as f64 / radar.prf;
            if w.contains(tau) {
                let d = geom.bistatic_delay(t.position, tau);
                dmin = dmin.min(d);
                dmax = dmax.max(d);
            }
        }
    }
    if !dmin.is_finite() {
        return Err(Error::InvalidParameter("no pulse falls inside any target window".into()));
    }
    let t0 = ((dmin - radar.pulse_duration) * radar.fs).floor() / radar.fs;
    let n_range = round_up(((dmax + radar.pulse_duration - t0) * radar.fs).ceil() as usize, 16);
    Ok(SimulationGrid { t0, n_range, tau_start, n_azimuth })
}

fn round_up(n: usize, k: usize) -> usize {
    n.div_ceil(k) * k
}

pub fn simulate(
    geom: &BistaticGeometry,
    scene: &Scene,
    radar: &RadarParams,
    aperture: &ApertureSpec,
    grid: &SimulationGrid,
) -> Result<RawDataGrid> {
    geom.validate()?;
    radar.validate()?;
    if scene.targets.is_empty() {
        return Err(Error::InvalidParameter("scene has no targets".into()));
    }
    let windows = target_windows(geom, scene, radar, aperture)?;
    let prf = radar.prf;
    let tau_of = |m: usize| grid.tau_start + m as f64 / prf;

    // fail loudly before any sample is written
    for (i, (t, w)) in scene.targets.iter().zip(&windows).enumerate() {
        for m in 0..grid.n_azimuth {
            let tau = tau_of(m);
            if !w.contains(tau) {
                continue;
            }
            let (lo, hi) = sample_span(geom.bistatic_delay(t.position, tau), radar, grid.t0);
            if lo < 0 || hi >= grid.n_range as i64 {
                return Err(Error::WindowOverrun { target: i, pulse: m });
            }
        }
    }

    let mut samples = Array2::<Complex64>::zeros((grid.n_azimuth, grid.n_range));
    samples.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(m, mut row)| {
        let tau = tau_of(m);
        for (t, w) in scene.targets.iter().zip(&windows) {
            if !w.contains(tau) || t.reflectivity == Complex64::new(0.0, 0.0) {
                continue;
            }
            let delay = geom.bistatic_delay(t.position, tau);
            let carrier = Complex64::from_polar(1.0, -2.0 * PI * (radar.f0 * delay).rem_euclid(1.0));
            let amp = t.reflectivity * carrier;
            let (lo, hi) = sample_span(delay, radar, grid.t0);
            for n in lo.max(0)..=hi.min(grid.n_range as i64 - 1) {
                let tn = grid.t0 + n as f64 / radar.fs;
                row[n as usize] += amp * baseband_chirp(radar, tn - delay);
            }
        }
    });
    Ok(RawDataGrid { samples, t0: grid.t0, tau_start: grid.tau_start, fs: radar.fs, prf })
}

/// Matched filtering of every pulse with the transmitted chirp.
pub fn range_compress(raw: &RawDataGrid, radar: &RadarParams) -> RawDataGrid {
    let n = raw.n_range();
    let filter: Vec<Complex64> = chirp_spectrum(radar, n).iter().map(|c| c.conj() / n as f64).collect();
    let fwd = plan(n, Direction::Forward);
    let inv = plan(n, Direction::Inverse);
    let mut samples = raw.samples.as_standard_layout().into_owned();
    samples.axis_iter_mut(Axis(0)).into_par_iter().for_each(|mut row| {
        let s = row.as_slice_mut().expect("standard layout");
        fwd.process(s);
        s.iter_mut().zip(&filter).for_each(|(x, h)| *x *= h);
        inv.process(s);
    });
    RawDataGrid { samples, ..raw.clone() }
}
