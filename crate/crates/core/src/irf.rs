//! Impulse-response analysis of focused point targets.
//!
//! Peaks are located on the image grid, refined on a patch interpolated by
//! zero-padding its spectrum, and measured on range and azimuth cuts
//! through the refined peak. The zero block goes into the weakest part of
//! the spectrum, so responses that are not centered at baseband are still
//! interpolated correctly.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{fft2, fft_cols, fft_inplace, fft_rows, Direction};
use crate::focuser::FocusedImage;

pub const DEFAULT_SEARCH: usize = 16;
pub const DEFAULT_UPSAMPLING: usize = 16;
const CUT_LEN: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IrfMetrics {
    /// Sub-cell peak position, `(azimuth, range)` cells.
    pub peak_cell: (f64, f64),
    /// `R0R` of the peak, m.
    pub peak_range: f64,
    /// `τ0R` of the peak, s.
    pub peak_tau: f64,
    /// Azimuth position of the peak, m along the receiver track.
    pub peak_az: f64,
    pub peak_mag: f64,
    pub res_range_3db: f64,
    pub res_az_3db: f64,
    pub pslr_range: f64,
    pub pslr_az: f64,
    /// `(Δrange, Δazimuth)` in m relative to the truth, when given.
    pub pos_error: Option<(f64, f64)>,
}

/// Peak position, −3 dB width and PSLR of a 1D cut, in input cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutMetrics {
    /// Peak offset from the cut center, cells.
    pub offset: f64,
    pub peak_mag: f64,
    pub width_3db: f64,
    pub pslr_db: f64,
}

/// Band-limited interpolation of a cyclic sequence by `up`.
pub fn upsample(cut: &[Complex64], up: usize) -> Vec<Complex64> {
    let n = cut.len();
    let mut spec = cut.to_vec();
    fft_inplace(&mut spec, Direction::Forward);
    let gap = weakest_bin(&spec);
    let mut padded = vec![Complex64::new(0.0, 0.0); n * up];
    // bins below `gap` keep their index, the rest wrap to the top
    for (k, v) in spec.iter().enumerate() {
        let kk = if k < gap { k } else { k + n * (up - 1) };
        padded[kk] = *v;
    }
    fft_inplace(&mut padded, Direction::Inverse);
    padded.iter().map(|x| x / n as f64).collect()
}

/// Bin at the center of the circular window of least spectral energy.
fn weakest_bin(spec: &[Complex64]) -> usize {
    weakest_window(&spec.iter().map(|x| x.norm_sqr()).collect::<Vec<_>>())
}

fn weakest_window(e: &[f64]) -> usize {
    let n = e.len();
    let w = (n / 4).max(1);
    let mut sum: f64 = (0..w).map(|k| e[k]).sum();
    let (mut best, mut best_start) = (sum, 0);
    for start in 1..n {
        sum += e[(start + w - 1) % n] - e[start - 1];
        if sum < best * (1.0 - 1e-12) {
            best = sum;
            best_start = start;
        }
    }
    (best_start + w / 2) % n
}

/// Analysis of a cut whose integer peak sits at index `len/2`.
pub fn analyze_cut(cut: &[Complex64], up: usize) -> CutMetrics {
    let n = cut.len();
    let mag: Vec<f64> = upsample(cut, up).iter().map(|x| x.norm()).collect();
    let center = (n / 2) * up;
    // local maximum nearest the center
    let lo = center.saturating_sub(up);
    let hi = (center + up).min(mag.len() - 1);
    let ip = (lo..=hi).max_by(|&a, &b| mag[a].total_cmp(&mag[b])).unwrap_or(center);
    analyze_fine(&mag, up, ip, center)
}

/// Metrics of an interpolated magnitude cut whose maximum sample is `ip`;
/// the offset is relative to fine index `center`.
fn analyze_fine(mag: &[f64], up: usize, ip: usize, center: usize) -> CutMetrics {
    let nn = mag.len();
    let at = |i: i64| mag[i.rem_euclid(nn as i64) as usize];
    let (ym, y0, yp) = (at(ip as i64 - 1), at(ip as i64), at(ip as i64 + 1));
    let frac = if ym > 0.0 && y0 > 0.0 && yp > 0.0 {
        let (lm, l0, lp) = (ym.ln(), y0.ln(), yp.ln());
        let den = lm - 2.0 * l0 + lp;
        if den < 0.0 { 0.5 * (lm - lp) / den } else { 0.0 }
    } else {
        0.0
    };
    let peak_fine = ip as f64 + frac;
    let peak_mag = if frac != 0.0 {
        let (lm, l0, lp) = (ym.ln(), y0.ln(), yp.ln());
        (l0 - 0.25 * (lm - lp) * frac).exp()
    } else {
        y0
    };

    let thr = peak_mag * 10f64.powf(-3.0 / 20.0);
    let crossing = |dir: i64| -> f64 {
        let mut i = ip as i64;
        for _ in 0..nn / 2 {
            let next = i + dir;
            if at(next) < thr {
                let (a, b) = (at(i), at(next));
                let t = (a - thr) / (a - b);
                return i as f64 + dir as f64 * t;
            }
            i = next;
        }
        i as f64
    };
    let width = (crossing(1) - crossing(-1)) / up as f64;

    // mainlobe ends at the first local minimum on each side
    let first_min = |dir: i64| -> i64 {
        let mut i = ip as i64;
        for _ in 0..nn / 2 {
            if at(i + dir) > at(i) {
                return i;
            }
            i += dir;
        }
        i
    };
    let (l, r) = (first_min(-1), first_min(1));
    let main = (r - l) as usize;
    let mut side: f64 = 0.0;
    for k in 1..nn.saturating_sub(main) {
        side = side.max(at(r + k as i64));
    }
    let pslr_db = if side > 0.0 { 20.0 * (side / peak_mag).log10() } else { -300.0 };
    CutMetrics { offset: (peak_fine - center as f64) / up as f64, peak_mag, width_3db: width, pslr_db }
}

/// Cyclic `CUT_LEN²` patch around `(j, m)` interpolated by `up` along both
/// axes. Bistatic responses are sheared, so the peak is located in 2D
/// before the axis cuts are taken.
fn upsample_patch(img: &FocusedImage, j: usize, m: usize, up: usize) -> Array2<Complex64> {
    let (na, nr) = img.samples.dim();
    let h = (CUT_LEN / 2) as i64;
    let mut patch = Array2::from_shape_fn((CUT_LEN, CUT_LEN), |(a, r)| {
        let jj = (j as i64 + a as i64 - h).rem_euclid(na as i64) as usize;
        let mm = (m as i64 + r as i64 - h).rem_euclid(nr as i64) as usize;
        img.samples[(jj, mm)]
    });
    fft2(&mut patch);
    let n = CUT_LEN as i64;
    let nu = CUT_LEN * up;
    let e = patch.mapv(|x| x.norm_sqr());
    // azimuth bins in signed order around the weakest band
    let gap_a = weakest_window(&e.sum_axis(Axis(1)).to_vec()) as i64;
    let mut order: Vec<(i64, usize)> = (0..CUT_LEN).map(|a| (if (a as i64) < gap_a { a as i64 } else { a as i64 - n }, a)).collect();
    order.sort();
    // the range band drifts with azimuth frequency for sheared responses:
    // place every row around its own centroid, unwrapped from the strongest
    let row_e: Vec<f64> = e.sum_axis(Axis(1)).to_vec();
    let emax = row_e.iter().cloned().fold(0.0, f64::max);
    let centroid = |a: usize| -> f64 {
        let z: Complex64 = e.row(a).iter().enumerate().map(|(k, &w)| Complex64::from_polar(w, 2.0 * PI * k as f64 / n as f64)).sum();
        z.arg() * n as f64 / (2.0 * PI)
    };
    let start = (0..CUT_LEN).max_by(|&a, &b| row_e[order[a].1].total_cmp(&row_e[order[b].1])).unwrap_or(0);
    let mut center = vec![0.0; CUT_LEN];
    center[start] = centroid(order[start].1);
    let ranges: [Box<dyn Iterator<Item = usize>>; 2] = [Box::new(start + 1..CUT_LEN), Box::new((0..start).rev())];
    for (dir, it) in ranges.into_iter().enumerate() {
        for i in it {
            let prev = center[if dir == 0 { i - 1 } else { i + 1 }];
            let a = order[i].1;
            center[i] = if row_e[a] > 1e-6 * emax {
                let c = centroid(a);
                c + n as f64 * ((prev - c) / n as f64).round()
            } else {
                prev
            };
        }
    }
    let mut fine = Array2::zeros((nu, nu));
    for (i, &(qa, a)) in order.iter().enumerate() {
        let c = center[i];
        for r in 0..CUT_LEN {
            let q = r as i64 + n * ((c - r as f64) / n as f64).round() as i64;
            fine[(qa.rem_euclid(nu as i64) as usize, q.rem_euclid(nu as i64) as usize)] = patch[(a, r)];
        }
    }
    fft_rows(&mut fine, Direction::Inverse);
    fft_cols(&mut fine, Direction::Inverse);
    let norm = (CUT_LEN * CUT_LEN) as f64;
    fine.mapv_inplace(|x| x / norm);
    fine
}

/// Integer cell of the largest magnitude within `search` cells of `approx`,
/// required to be a strict interior maximum of the window.
pub fn find_peak(img: &FocusedImage, approx: (f64, f64), search: usize) -> Result<(usize, usize)> {
    let (na, nr) = img.samples.dim();
    let (ja, ma) = (approx.0.round() as i64, approx.1.round() as i64);
    let fail = || Error::NoPeakFound {
        range_cell: ma.max(0) as usize,
        azimuth_cell: ja.max(0) as usize,
    };
    if ja < 0 || ma < 0 || ja >= na as i64 || ma >= nr as i64 {
        return Err(fail());
    }
    let s = search as i64;
    let mut best = (0.0, ja, ma);
    for j in ja - s..=ja + s {
        for m in ma - s..=ma + s {
            if j < 0 || m < 0 || j >= na as i64 || m >= nr as i64 {
                continue;
            }
            let v = img.samples[(j as usize, m as usize)].norm();
            if v > best.0 {
                best = (v, j, m);
            }
        }
    }
    let (v, j, m) = best;
    let on_edge = (j - ja).abs() == s && j != 0 && j != na as i64 - 1
        || (m - ma).abs() == s && m != 0 && m != nr as i64 - 1;
    if !(v > 0.0) || on_edge {
        return Err(fail());
    }
    Ok((j as usize, m as usize))
}

pub fn extract_irf_with(
    img: &FocusedImage,
    approx: (f64, f64),
    truth: Option<(f64, f64)>,
    search: usize,
    up: usize,
) -> Result<IrfMetrics> {
    let (j, m) = find_peak(img, approx, search)?;
    let fine = upsample_patch(img, j, m, up);
    let center = (CUT_LEN / 2) * up;
    let (mut ja, mut mr, mut best) = (center, center, -1.0);
    for a in center - up..=center + up {
        for r in center - up..=center + up {
            let v = fine[(a, r)].norm();
            if v > best {
                (ja, mr, best) = (a, r, v);
            }
        }
    }
    let row: Vec<f64> = fine.row(ja).iter().map(|x| x.norm()).collect();
    let col: Vec<f64> = fine.column(mr).iter().map(|x| x.norm()).collect();
    let rc = analyze_fine(&row, up, mr, center);
    let ac = analyze_fine(&col, up, ja, center);
    let peak_cell = (j as f64 + ac.offset, m as f64 + rc.offset);
    let peak_range = img.range_at(peak_cell.1);
    let peak_tau = img.tau_at(peak_cell.0);
    let peak_az = peak_tau * img.az_speed;
    let pos_error = truth.map(|(r0r, tau0r)| (peak_range - r0r, (peak_tau - tau0r) * img.az_speed));
    Ok(IrfMetrics {
        peak_cell,
        peak_range,
        peak_tau,
        peak_az,
        peak_mag: rc.peak_mag.max(ac.peak_mag),
        res_range_3db: rc.width_3db * img.range_cell(),
        res_az_3db: ac.width_3db * img.az_cell_meters(),
        pslr_range: rc.pslr_db,
        pslr_az: ac.pslr_db,
        pos_error,
    })
}

/// IRF metrics near `approx` (`(azimuth, range)` cells); `truth` is the
/// expected `(R0R, τ0R)`.
pub fn extract_irf(img: &FocusedImage, approx: (f64, f64), truth: Option<(f64, f64)>) -> Result<IrfMetrics> {
    extract_irf_with(img, approx, truth, DEFAULT_SEARCH, DEFAULT_UPSAMPLING)
}

/// Axis-wise separation `b − a` of two peaks, `(range m, azimuth m)`.
pub fn pairwise_distance(img: &FocusedImage, a: (f64, f64), b: (f64, f64)) -> Result<(f64, f64)> {
    let pa = extract_irf(img, a, None)?;
    let pb = extract_irf(img, b, None)?;
    Ok((pb.peak_range - pa.peak_range, pb.peak_az - pa.peak_az))
}
