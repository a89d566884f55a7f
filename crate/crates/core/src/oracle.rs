//! Brute-force references: the point-target spectrum by direct quadrature
//! and time-domain back-projection.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::{Complex32, Complex64};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fft::{fft_inplace, Direction};
use crate::focuser::{FocusContext, FocusDiagnostics, FocusedImage, OutputGrid};
use crate::geometry::{doppler_window, ground_point, ApertureSpec, BeamExtent, BistaticGeometry, DopplerWindow, PlatformBeam, Vec3};
use crate::lbf::{evaluate_grid, LbfKernel};
use crate::rawsim::{RadarParams, RawDataGrid};
use crate::sfft::cis_cycles;

/// Samples per cycle of the fastest integrand oscillation.
pub const DEFAULT_OVERSAMPLING: f64 = 16.0;

/// Azimuth spectrum of one target by midpoint quadrature over its window,
/// `[f_tau][f]`: `∫ exp(−j2π[(f+f0)·τ_d(τ) + f_tau·τ]) dτ`.
pub fn numeric_spectrum(
    geom: &BistaticGeometry,
    target: Vec3,
    f0: f64,
    window: &DopplerWindow,
    f_axis: &[f64],
    f_tau_axis: &[f64],
    oversampling: f64,
) -> Array2<Complex64> {
    let (nf, nt) = (f_axis.len(), f_tau_axis.len());
    if window.tau_span <= 0.0 || nf == 0 || nt == 0 {
        return Array2::zeros((nt, nf));
    }
    let lo = window.tau_cb - 0.5 * window.tau_span;
    let hi = window.tau_cb + 0.5 * window.tau_span;
    // fastest integrand frequency over the window and the grid
    let rate = |tau: f64| {
        let h = 1e-4 * window.tau_span;
        (geom.bistatic_delay(target, tau + h) - geom.bistatic_delay(target, tau - h)) / (2.0 * h)
    };
    let fmax = f_axis.iter().map(|f| (f + f0).abs()).fold(0.0, f64::max);
    let ftmax = f_tau_axis.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let inst = (0..=16)
        .map(|i| rate(lo + (hi - lo) * i as f64 / 16.0).abs() * fmax)
        .fold(0.0, f64::max)
        + ftmax;
    let n = ((hi - lo) * oversampling * inst.max(1.0 / (hi - lo))).ceil() as usize;
    let dtau = (hi - lo) / n as f64;
    let taus: Vec<f64> = (0..n).map(|i| lo + (i as f64 + 0.5) * dtau).collect();
    let delays: Vec<f64> = taus.iter().map(|&t| geom.bistatic_delay(target, t)).collect();
    let rows: Vec<Vec<Complex64>> = f_tau_axis
        .par_iter()
        .map(|&ft| {
            f_axis
                .iter()
                .map(|&f| {
                    let ff = f + f0;
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (t, d) in taus.iter().zip(&delays) {
                        acc += cis_cycles(-(ff * d + ft * t));
                    }
                    acc * dtau
                })
                .collect()
        })
        .collect();
    Array2::from_shape_fn((nt, nf), |(i, k)| rows[i][k])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub rms_phase_error: f64,
    pub max_phase_error: f64,
    /// Mean phase difference, rad.
    pub mean_phase_error: f64,
    /// Fraction of grid cells above the noise floor in both spectra.
    pub support_fraction: f64,
    /// RMS of `|lbf|/|numeric| − 1` over the joint support.
    pub rms_magnitude_error: f64,
    /// Per-cell phase error `[f_tau][f]`; NaN outside the joint support.
    pub error_map: Vec<Vec<f64>>,
}

/// Relative magnitude below which cells are excluded from comparisons.
pub const NOISE_FLOOR: f64 = 0.1;

pub fn compare_grids(lbf: &Array2<Complex64>, numeric: &Array2<Complex64>, floor: f64) -> OracleReport {
    let pl = lbf.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pn = numeric.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut map = vec![vec![f64::NAN; lbf.ncols()]; lbf.nrows()];
    let (mut n, mut s1, mut s2, mut mx, mut sm) = (0usize, 0.0, 0.0, 0.0f64, 0.0);
    for ((i, k), a) in lbf.indexed_iter() {
        let b = numeric[(i, k)];
        if pl == 0.0 || pn == 0.0 || a.norm() < floor * pl || b.norm() < floor * pn {
            continue;
        }
        let e = (b * a.conj()).arg();
        map[i][k] = e;
        n += 1;
        s1 += e;
        s2 += e * e;
        mx = mx.max(e.abs());
        sm += (a.norm() / b.norm() - 1.0).powi(2);
    }
    let nn = n.max(1) as f64;
    OracleReport {
        rms_phase_error: if n > 0 { (s2 / nn).sqrt() } else { f64::NAN },
        max_phase_error: if n > 0 { mx } else { f64::NAN },
        mean_phase_error: if n > 0 { s1 / nn } else { f64::NAN },
        support_fraction: n as f64 / lbf.len().max(1) as f64,
        rms_magnitude_error: if n > 0 { (sm / nn).sqrt() } else { f64::NAN },
        error_map: map,
    }
}

/// LBF against the quadrature reference on the same grid.
pub fn compare_lbf(
    geom: &BistaticGeometry,
    target: Vec3,
    radar: &RadarParams,
    window: &DopplerWindow,
    f_axis: &[f64],
    f_tau_axis: &[f64],
) -> Result<OracleReport> {
    let kernel = LbfKernel::from_geometry(geom, target, radar.f0)?;
    let lbf = evaluate_grid(&kernel, f_axis, f_tau_axis, Some(window));
    let num = numeric_spectrum(geom, target, radar.f0, window, f_axis, f_tau_axis, DEFAULT_OVERSAMPLING);
    Ok(compare_grids(&lbf.samples, &num, NOISE_FLOOR))
}

/// Comparison grid over the central `fraction` of the range band and of
/// the Doppler band, where edge ripple of the finite window stays small.
pub fn central_grid(radar: &RadarParams, window: &DopplerWindow, fraction: f64, nf: usize, nt: usize) -> (Vec<f64>, Vec<f64>) {
    let lin = |c: f64, half: f64, n: usize| -> Vec<f64> {
        (0..n).map(|i| c - half + 2.0 * half * (i as f64 + 0.5) / n as f64).collect()
    };
    (
        lin(0.0, 0.5 * fraction * radar.bandwidth, nf),
        lin(window.fdc, 0.5 * fraction * window.az_bandwidth, nt),
    )
}

/// Fraction of each band compared by [`validity_report`].
pub const VALIDITY_FRACTION: f64 = 0.8;

/// LBF error of one target with both apertures stretched by `stretch`,
/// compared over the Doppler band of the unstretched aperture. Stretching
/// moves the Fresnel ripple of the window edges away from the compared
/// band, so the report isolates the stationary-phase approximation.
/// `stretch = 1` is the plain comparison over the central band.
pub fn validity_report(
    geom: &BistaticGeometry,
    target: Vec3,
    radar: &RadarParams,
    aperture: &ApertureSpec,
    stretch: f64,
) -> Result<OracleReport> {
    if !(stretch >= 1.0 && stretch.is_finite()) {
        return Err(crate::Error::InvalidParameter(format!("aperture stretch must be at least 1, got {stretch}")));
    }
    let widen = |b: PlatformBeam| PlatformBeam {
        extent: match b.extent {
            BeamExtent::Dwell(d) => BeamExtent::Dwell(d * stretch),
            BeamExtent::Beamwidth(w) => BeamExtent::Beamwidth(w * stretch),
        },
        ..b
    };
    let long = ApertureSpec { tx: widen(aperture.tx), rx: widen(aperture.rx) };
    let w = doppler_window(geom, target, radar.f0, &long)?;
    let (fa, _) = central_grid(radar, &w, VALIDITY_FRACTION, 9, 21);
    let nominal = DopplerWindow { az_bandwidth: w.az_bandwidth / stretch, ..w };
    let (_, ft) = central_grid(radar, &nominal, VALIDITY_FRACTION, 9, 21);
    compare_lbf(geom, target, radar, &w, &fa, &ft)
}

/// Band-limited 8× interpolation of every range line, stored in single
/// precision to bound memory.
fn oversample_rows(raw: &RawDataGrid, up: usize) -> Array2<Complex32> {
    let (m, n) = raw.samples.dim();
    let rows: Vec<Vec<Complex32>> = (0..m)
        .into_par_iter()
        .map(|j| {
            let mut s: Vec<Complex64> = raw.samples.row(j).to_vec();
            fft_inplace(&mut s, Direction::Forward);
            let mut p = vec![Complex64::new(0.0, 0.0); n * up];
            let half = n.div_ceil(2);
            for (k, v) in s.iter().enumerate() {
                let kk = if k < half { k } else { k + n * (up - 1) };
                p[kk] = *v / n as f64;
            }
            fft_inplace(&mut p, Direction::Inverse);
            p.iter().map(|z| Complex32::new(z.re as f32, z.im as f32)).collect()
        })
        .collect();
    Array2::from_shape_fn((m, n * up), |(j, k)| rows[j][k])
}

pub const BACKPROJECTION_OVERSAMPLING: usize = 8;

/// Time-domain back-projection of range-compressed data onto a grid of
/// receiver coordinates.
pub fn backproject(compressed: &RawDataGrid, ctx: &FocusContext, grid: &OutputGrid) -> Result<FocusedImage> {
    let up = BACKPROJECTION_OVERSAMPLING;
    let data = oversample_rows(compressed, up);
    let nu = data.ncols();
    let fs_up = compressed.fs * up as f64;
    let f0 = ctx.radar.f0;
    let mut points = Vec::with_capacity(grid.n_azimuth * grid.n_range);
    for j in 0..grid.n_azimuth {
        for m in 0..grid.n_range {
            points.push(ground_point(&ctx.geom.rx, ctx.side, grid.range_at(m as f64), grid.tau_at(j as f64))?);
        }
    }
    let pix: Vec<Complex64> = points
        .par_iter()
        .map(|&p| {
            let mut acc = Complex64::new(0.0, 0.0);
            for mrow in 0..compressed.n_azimuth() {
                let tau = compressed.slow_time(mrow);
                let d = ctx.geom.bistatic_delay(p, tau);
                let x = (d - compressed.t0) * fs_up;
                if x < 0.0 || x >= (nu - 1) as f64 {
                    continue;
                }
                let i = x.floor() as usize;
                let t = (x - i as f64) as f32;
                let v = data[(mrow, i)] * (1.0 - t) + data[(mrow, i + 1)] * t;
                acc += Complex64::new(v.re as f64, v.im as f64) * Complex64::from_polar(1.0, 2.0 * PI * (f0 * d).rem_euclid(1.0));
            }
            acc
        })
        .collect();
    let samples = Array2::from_shape_vec((grid.n_azimuth, grid.n_range), pix)
        .map_err(|e| crate::Error::Format(e.to_string()))?;
    Ok(FocusedImage {
        samples,
        grid: *grid,
        az_speed: ctx.geom.rx.speed(),
        processor: "backprojection".into(),
        diagnostics: FocusDiagnostics::default(),
    })
}

/// Small grid centered on a receiver coordinate, with the spacing of the
/// frequency-domain processors.
pub fn patch_grid(raw: &RawDataGrid, center: (f64, f64), half_cells: usize) -> OutputGrid {
    let dr = crate::SPEED_OF_LIGHT / (2.0 * raw.fs);
    let dt = 1.0 / raw.prf;
    let n = 2 * half_cells + 1;
    OutputGrid {
        range_start: center.0 - half_cells as f64 * dr,
        range_spacing: dr,
        n_range: n,
        tau_start: center.1 - half_cells as f64 * dt,
        tau_spacing: dt,
        n_azimuth: n,
    }
}
