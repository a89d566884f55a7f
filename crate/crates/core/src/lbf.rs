//! Analytic bistatic point-target spectrum.
//!
//! The azimuth Fourier kernel is split evenly between the transmitter and
//! receiver phase histories. Each half is expanded to second order about its
//! own stationary point; the two quadratics are merged at a common point,
//! which produces a quasi-monostatic phase `psi1` and a bistatic deformation
//! phase `psi2`. The transmitted chirp spectrum is left out of every value
//! here and re-applied by callers.

use std::f64::consts::PI;

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bistatic_params, pca, BistaticGeometry, BistaticParams, DopplerWindow, Trajectory, Vec3};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqPair {
    /// Baseband range frequency, Hz.
    pub f: f64,
    /// Doppler frequency, Hz.
    pub f_tau: f64,
}

impl FreqPair {
    pub fn new(f: f64, f_tau: f64) -> Self {
        Self { f, f_tau }
    }
}

/// Range-migration factor `F = (f+f0)² − (c·f_tau/(2v))²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MigrationFactor {
    pub f0: f64,
    pub speed: f64,
}

impl MigrationFactor {
    pub fn new(f0: f64, speed: f64) -> Self {
        Self { f0, speed }
    }

    pub fn value(&self, f: f64, f_tau: f64) -> f64 {
        let d = SPEED_OF_LIGHT * f_tau / (2.0 * self.speed);
        (f + self.f0) * (f + self.f0) - d * d
    }

    /// `F^(1/2)`, or `None` outside the spectral support.
    pub fn sqrt(&self, f: f64, f_tau: f64) -> Option<f64> {
        let v = self.value(f, f_tau);
        (v > 0.0 && f + self.f0 > 0.0).then(|| v.sqrt())
    }

    pub fn pow_3_2(&self, f: f64, f_tau: f64) -> Option<f64> {
        self.sqrt(f, f_tau).map(|s| s * s * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StationarySolution {
    pub tau_t: f64,
    pub tau_r: f64,
    /// Weighted mean of the individual points.
    pub tau_common: f64,
    pub ddphi_t: f64,
    pub ddphi_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LbfValue {
    pub psi1: f64,
    pub psi2: f64,
    pub amplitude: Complex64,
    pub window: f64,
    pub total: Complex64,
}

/// One half of the split azimuth kernel, `2π[(f+f0)R(τ)/c + f_tau·τ/2]`.
#[derive(Debug, Clone, Copy)]
pub struct SplitPhase {
    traj: Trajectory,
    target: Vec3,
    /// `(f + f0)/c`, cycles per meter.
    k: f64,
    half_doppler: f64,
}

impl SplitPhase {
    pub fn phase(&self, tau: f64) -> f64 {
        let r = (self.traj.position(tau) - self.target).norm();
        2.0 * PI * (self.k * r + self.half_doppler * tau)
    }

    pub fn rate(&self, tau: f64) -> f64 {
        let d = self.traj.position(tau) - self.target;
        2.0 * PI * (self.k * d.dot(self.traj.velocity) / d.norm() + self.half_doppler)
    }

    pub fn accel(&self, tau: f64) -> f64 {
        let d = self.traj.position(tau) - self.target;
        let r = d.norm();
        let v2 = self.traj.velocity.dot(self.traj.velocity);
        let rdot = d.dot(self.traj.velocity) / r;
        2.0 * PI * self.k * (v2 - rdot * rdot) / r
    }

    /// Root of `rate` by bracketed Newton iteration, independent of any
    /// closed form. `None` when the Doppler half-frequency exceeds the
    /// maximum range rate.
    pub fn stationary_time(&self) -> Option<f64> {
        let v = self.traj.speed();
        if self.k <= 0.0 || (self.half_doppler / self.k).abs() >= v {
            return None;
        }
        let start = (self.target - self.traj.ref_position).dot(self.traj.velocity) / (v * v);
        let mut step = 1.0;
        let (mut lo, mut hi) = (start - step, start + step);
        while self.rate(lo) > 0.0 {
            step *= 2.0;
            lo = start - step;
            if !lo.is_finite() {
                return None;
            }
        }
        step = 1.0;
        while self.rate(hi) < 0.0 {
            step *= 2.0;
            hi = start + step;
            if !hi.is_finite() {
                return None;
            }
        }
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let g = self.rate(x);
            if g > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let newton = x - g / self.accel(x);
            let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
            if (next - x).abs() <= 1e-15 * (1.0 + x.abs()) || hi - lo <= 1e-15 * (1.0 + x.abs()) {
                return Some(next);
            }
            x = next;
        }
        Some(x)
    }
}

pub fn split_phases(geom: &BistaticGeometry, target: Vec3, fq: FreqPair, f0: f64) -> Result<(SplitPhase, SplitPhase)> {
    if pca(&geom.tx, target)?.r0 <= 0.0 {
        return Err(Error::DegenerateRange { platform: "transmitter" });
    }
    if pca(&geom.rx, target)?.r0 <= 0.0 {
        return Err(Error::DegenerateRange { platform: "receiver" });
    }
    let k = (fq.f + f0) / SPEED_OF_LIGHT;
    let half_doppler = 0.5 * fq.f_tau;
    Ok((
        SplitPhase { traj: geom.tx, target, k, half_doppler },
        SplitPhase { traj: geom.rx, target, k, half_doppler },
    ))
}

/// Closed-form LBF of one target, parameterized by its two closest
/// approaches and the two platform speeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LbfKernel {
    pub params: BistaticParams,
    pub speed_t: f64,
    pub speed_r: f64,
    pub f0: f64,
}

/// Stationary offset from the closest approach and `φ̈` of one platform.
fn platform_terms(r0: f64, speed: f64, f0: f64, fq: FreqPair) -> Option<(f64, f64, f64)> {
    let m = MigrationFactor::new(f0, speed);
    let sf = m.sqrt(fq.f, fq.f_tau)?;
    let ft = fq.f + f0;
    let c = SPEED_OF_LIGHT;
    let offset = -r0 * c * fq.f_tau / (2.0 * speed * speed * sf);
    let ddphi = 2.0 * PI * speed * speed * sf * sf * sf / (c * r0 * ft * ft);
    Some((offset, ddphi, sf))
}

impl LbfKernel {
    pub fn new(params: BistaticParams, speed_t: f64, speed_r: f64, f0: f64) -> Self {
        Self { params, speed_t, speed_r, f0 }
    }

    pub fn from_geometry(geom: &BistaticGeometry, target: Vec3, f0: f64) -> Result<Self> {
        geom.validate()?;
        let params = bistatic_params(geom, target)?;
        if params.r0t <= 0.0 {
            return Err(Error::DegenerateRange { platform: "transmitter" });
        }
        if params.r0r <= 0.0 {
            return Err(Error::DegenerateRange { platform: "receiver" });
        }
        Ok(Self::new(params, geom.tx.speed(), geom.rx.speed(), f0))
    }

    pub fn stationary_points(&self, fq: FreqPair) -> Result<StationarySolution> {
        let p = &self.params;
        let none = || Error::NoStationaryPoint { f: fq.f, f_tau: fq.f_tau };
        let (ot, ddt, _) = platform_terms(p.r0t, self.speed_t, self.f0, fq).ok_or_else(none)?;
        let (or, ddr, _) = platform_terms(p.r0r, self.speed_r, self.f0, fq).ok_or_else(none)?;
        let tau_t = p.tau0t + ot;
        let tau_r = p.tau0r + or;
        let tau_common = (ddt * tau_t + ddr * tau_r) / (ddt + ddr);
        Ok(StationarySolution { tau_t, tau_r, tau_common, ddphi_t: ddt, ddphi_r: ddr })
    }

    /// `(psi1, psi2, stationary points)`.
    pub fn phases(&self, fq: FreqPair) -> Result<(f64, f64, StationarySolution)> {
        let p = &self.params;
        let none = || Error::NoStationaryPoint { f: fq.f, f_tau: fq.f_tau };
        let sft = MigrationFactor::new(self.f0, self.speed_t).sqrt(fq.f, fq.f_tau).ok_or_else(none)?;
        let sfr = MigrationFactor::new(self.f0, self.speed_r).sqrt(fq.f, fq.f_tau).ok_or_else(none)?;
        let sol = self.stationary_points(fq)?;
        let psi1 = PI * fq.f_tau * (p.tau0t + p.tau0r) + 2.0 * PI / SPEED_OF_LIGHT * (p.r0t * sft + p.r0r * sfr);
        Ok((psi1, psi2_of(&sol), sol))
    }

    pub fn evaluate(&self, fq: FreqPair, window: Option<&DopplerWindow>) -> Result<LbfValue> {
        let (psi1, psi2, sol) = self.phases(fq)?;
        Ok(assemble(psi1, psi2, &sol, window))
    }
}

fn psi2_of(sol: &StationarySolution) -> f64 {
    let d = sol.tau_t - sol.tau_r;
    sol.ddphi_t * sol.ddphi_r / (2.0 * (sol.ddphi_t + sol.ddphi_r)) * d * d
}

fn assemble(psi1: f64, psi2: f64, sol: &StationarySolution, window: Option<&DopplerWindow>) -> LbfValue {
    let amplitude = Complex64::from_polar((2.0 * PI / (sol.ddphi_t + sol.ddphi_r)).sqrt(), -PI / 4.0);
    let window = match window {
        Some(w) if !w.contains(sol.tau_common) => 0.0,
        _ => 1.0,
    };
    let total = if window == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        amplitude * Complex64::from_polar(1.0, -wrap(psi1 + psi2))
    };
    LbfValue { psi1, psi2, amplitude, window, total }
}

/// Reduces a large phase to `[-π, π)` before it reaches `sin`/`cos`.
pub fn wrap(phase: f64) -> f64 {
    (phase + PI).rem_euclid(2.0 * PI) - PI
}

/// Stationary points from the closed form, refined by the root-finder
/// whenever the two disagree by more than a nanosecond.
pub fn stationary_points(geom: &BistaticGeometry, target: Vec3, fq: FreqPair, f0: f64) -> Result<StationarySolution> {
    let kernel = LbfKernel::from_geometry(geom, target, f0)?;
    let mut sol = kernel.stationary_points(fq)?;
    let (pt, pr) = split_phases(geom, target, fq, f0)?;
    let none = || Error::NoStationaryPoint { f: fq.f, f_tau: fq.f_tau };
    let nt = pt.stationary_time().ok_or_else(none)?;
    let nr = pr.stationary_time().ok_or_else(none)?;
    if (nt - sol.tau_t).abs() > 1e-9 || (nr - sol.tau_r).abs() > 1e-9 {
        sol.tau_t = nt;
        sol.tau_r = nr;
        sol.ddphi_t = pt.accel(nt);
        sol.ddphi_r = pr.accel(nr);
        sol.tau_common = (sol.ddphi_t * nt + sol.ddphi_r * nr) / (sol.ddphi_t + sol.ddphi_r);
    }
    Ok(sol)
}

/// LBF value with `psi1` taken directly from the two phase histories at
/// their stationary points.
pub fn evaluate(
    geom: &BistaticGeometry,
    target: Vec3,
    fq: FreqPair,
    f0: f64,
    window: Option<&DopplerWindow>,
) -> Result<LbfValue> {
    let sol = stationary_points(geom, target, fq, f0)?;
    let (pt, pr) = split_phases(geom, target, fq, f0)?;
    let psi1 = pt.phase(sol.tau_t) + pr.phase(sol.tau_r);
    Ok(assemble(psi1, psi2_of(&sol), &sol, window))
}

/// LBF totals on a frequency grid, `[f_tau][f]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LbfGrid {
    pub samples: Array2<Complex64>,
    pub f_axis: Vec<f64>,
    pub f_tau_axis: Vec<f64>,
    /// Cells with no stationary point, set to zero.
    pub outside_support: usize,
}

pub fn evaluate_grid(
    kernel: &LbfKernel,
    f_axis: &[f64],
    f_tau_axis: &[f64],
    window: Option<&DopplerWindow>,
) -> LbfGrid {
    let rows: Vec<(Vec<Complex64>, usize)> = f_tau_axis
        .par_iter()
        .map(|&ft| {
            let mut missing = 0;
            let row = f_axis
                .iter()
                .map(|&f| match kernel.evaluate(FreqPair::new(f, ft), window) {
                    Ok(v) => v.total,
                    Err(_) => {
                        missing += 1;
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect();
            (row, missing)
        })
        .collect();
    let mut samples = Array2::zeros((f_tau_axis.len(), f_axis.len()));
    let mut outside_support = 0;
    for (i, (row, missing)) in rows.into_iter().enumerate() {
        samples.row_mut(i).assign(&ndarray::Array1::from(row));
        outside_support += missing;
    }
    LbfGrid { samples, f_axis: f_axis.to_vec(), f_tau_axis: f_tau_axis.to_vec(), outside_support }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{doppler_window, ApertureSpec};
    use proptest::prelude::*;

    const F0: f64 = 10.17e9;

    fn airborne_gc() -> BistaticGeometry {
        let rx = Trajectory::new(Vec3::new(0.0, -3068.0, 2397.0), Vec3::new(98.0, 0.0, 0.0));
        let psi = (-2.498f64).to_radians();
        let tx = Trajectory::new(Vec3::new(0.0, -3080.0, 3421.0), Vec3::new(98.0 * psi.cos(), 98.0 * psi.sin(), 0.0));
        BistaticGeometry::new(tx, rx)
    }

    fn tandem(d: f64) -> BistaticGeometry {
        let rx = Trajectory::new(Vec3::new(0.0, -200e3, 200e3), Vec3::new(7000.0, 0.0, 0.0));
        let tx = Trajectory::new(Vec3::new(-d, -200e3, 200e3), Vec3::new(7000.0, 0.0, 0.0));
        BistaticGeometry::new(tx, rx)
    }

    #[test]
    fn zero_doppler_points_are_the_closest_approaches() {
        let g = airborne_gc();
        let p = Vec3::new(0.0, 0.0, 0.0);
        let sol = stationary_points(&g, p, FreqPair::new(3e6, 0.0), F0).unwrap();
        let bp = bistatic_params(&g, p).unwrap();
        assert!((sol.tau_t - bp.tau0t).abs() < 1e-12);
        assert!((sol.tau_r - bp.tau0r).abs() < 1e-12);
        assert!((sol.tau_t - sol.tau_r - bp.a0).abs() < 1e-12);
    }

    #[test]
    fn split_phase_is_flat_at_closest_approach() {
        let g = airborne_gc();
        let p = Vec3::new(50.0, 30.0, 0.0);
        let (pt, pr) = split_phases(&g, p, FreqPair::new(0.0, 0.0), F0).unwrap();
        let bp = bistatic_params(&g, p).unwrap();
        assert!(pt.rate(bp.tau0t).abs() < 1e-9);
        assert!(pr.rate(bp.tau0r).abs() < 1e-9);
    }

    #[test]
    fn split_phases_sum_to_kernel_phase() {
        let g = airborne_gc();
        let p = Vec3::new(10.0, -20.0, 0.0);
        let fq = FreqPair::new(-4e6, 37.0);
        let (pt, pr) = split_phases(&g, p, fq, F0).unwrap();
        for i in 0..50 {
            let tau = -3.0 + 0.12 * i as f64;
            let kernel = 2.0 * PI * ((fq.f + F0) * g.bistatic_delay(p, tau) + fq.f_tau * tau);
            let sum = pt.phase(tau) + pr.phase(tau);
            assert!((kernel - sum).abs() < 1e-9 * kernel.abs().max(1.0), "{kernel} {sum}");
        }
    }

    #[test]
    fn monostatic_phases_coincide_and_psi2_vanishes() {
        let traj = Trajectory::new(Vec3::new(0.0, -3000.0, 2400.0), Vec3::new(98.0, 0.0, 0.0));
        let g = BistaticGeometry::monostatic(traj);
        let p = Vec3::new(5.0, 0.0, 0.0);
        for (f, ft) in [(0.0, 0.0), (8e6, 120.0), (-9e6, -300.0)] {
            let fq = FreqPair::new(f, ft);
            let (pt, pr) = split_phases(&g, p, fq, F0).unwrap();
            assert_eq!(pt.phase(1.3), pr.phase(1.3));
            let v = evaluate(&g, p, fq, F0, None).unwrap();
            assert_eq!(v.psi2, 0.0);
        }
    }

    #[test]
    fn monostatic_psi1_is_the_classical_spectrum_phase() {
        let traj = Trajectory::new(Vec3::new(0.0, -3000.0, 2400.0), Vec3::new(98.0, 0.0, 0.0));
        let g = BistaticGeometry::monostatic(traj);
        let p = Vec3::new(40.0, 0.0, 0.0);
        let bp = bistatic_params(&g, p).unwrap();
        for i in 0..40 {
            let f = -10e6 + 0.5e6 * i as f64;
            let ft = -400.0 + 20.0 * i as f64;
            let v = evaluate(&g, p, FreqPair::new(f, ft), F0, None).unwrap();
            let d = SPEED_OF_LIGHT * ft / (2.0 * 98.0);
            let classic = 4.0 * PI * bp.r0r / SPEED_OF_LIGHT * ((f + F0).powi(2) - d * d).sqrt()
                + 2.0 * PI * ft * bp.tau0r;
            assert!(wrap(v.psi1 - classic).abs() < 1e-6);
        }
    }

    #[test]
    fn tandem_offset_between_points_is_constant() {
        let g = tandem(1000.0);
        let p = Vec3::new(0.0, 0.0, 0.0);
        let a0 = bistatic_params(&g, p).unwrap().a0;
        assert!((a0 - 1000.0 / 7000.0).abs() < 1e-12);
        for i in 0..21 {
            let ft = -1250.0 + 125.0 * i as f64;
            let sol = stationary_points(&g, p, FreqPair::new(10e6, ft), 5.16e9).unwrap();
            assert!((sol.tau_t - sol.tau_r - a0).abs() < 1e-9);
        }
    }

    #[test]
    fn tandem_psi2_follows_the_migration_law_and_stays_nearly_flat() {
        let g = tandem(1000.0);
        let p = Vec3::new(0.0, 0.0, 0.0);
        let k = LbfKernel::from_geometry(&g, p, 5.16e9).unwrap();
        let f = 15e6;
        let (_, base, _) = k.phases(FreqPair::new(f, 0.0)).unwrap();
        let m = MigrationFactor::new(5.16e9, 7000.0);
        for i in 0..21 {
            let ft = -1250.0 + 125.0 * i as f64;
            let (_, psi2, _) = k.phases(FreqPair::new(f, ft)).unwrap();
            let law = (m.value(f, ft) / (f + 5.16e9).powi(2)).powf(1.5);
            assert!((psi2 / base - law).abs() < 1e-12);
            // the Doppler dependence is far below a quarter cycle
            assert!((psi2 - base).abs() < 0.01);
        }
    }

    #[test]
    fn closed_form_matches_root_finder_for_general_geometries() {
        let mut rng_state = 7u64;
        let mut next = || {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let rx = Trajectory::new(
                Vec3::new(0.0, -3000.0 - 500.0 * next(), 2000.0 + 1000.0 * next()),
                Vec3::new(90.0 + 20.0 * next(), 5.0 * (next() - 0.5), 0.0),
            );
            let tx = Trajectory::new(
                Vec3::new(300.0 * (next() - 0.5), -2500.0 - 1000.0 * next(), 3000.0 + 1000.0 * next()),
                Vec3::new(80.0 + 30.0 * next(), 10.0 * (next() - 0.5), 2.0 * (next() - 0.5)),
            );
            let g = BistaticGeometry::new(tx, rx);
            let p = Vec3::new(100.0 * next(), 100.0 * next(), 0.0);
            let fq = FreqPair::new(20e6 * (next() - 0.5), 600.0 * (next() - 0.5));
            let k = LbfKernel::from_geometry(&g, p, F0).unwrap();
            let closed = k.stationary_points(fq).unwrap();
            let (pt, pr) = split_phases(&g, p, fq, F0).unwrap();
            assert!((closed.tau_t - pt.stationary_time().unwrap()).abs() < 1e-10);
            assert!((closed.tau_r - pr.stationary_time().unwrap()).abs() < 1e-10);
            assert!((closed.ddphi_t - pt.accel(closed.tau_t)).abs() < 1e-9 * closed.ddphi_t);
            let v = evaluate(&g, p, fq, F0, None).unwrap();
            let kv = k.evaluate(fq, None).unwrap();
            assert!(wrap(v.psi1 - kv.psi1).abs() < 1e-6);
        }
    }

    #[test]
    fn outside_support_is_rejected() {
        let g = airborne_gc();
        let p = Vec3::new(0.0, 0.0, 0.0);
        // the Doppler limit is 2v(f+f0)/c ≈ 6650 Hz
        let err = stationary_points(&g, p, FreqPair::new(0.0, 7000.0), F0).unwrap_err();
        assert!(matches!(err, Error::NoStationaryPoint { .. }));
        let (pt, _) = split_phases(&g, p, FreqPair::new(0.0, 7000.0), F0).unwrap();
        assert!(pt.stationary_time().is_none());
    }

    #[test]
    fn degenerate_range_is_rejected() {
        let traj = Trajectory::new(Vec3::new(0.0, 0.0, 0.0), Vec3::new(98.0, 0.0, 0.0));
        let g = BistaticGeometry::monostatic(traj);
        let err = split_phases(&g, Vec3::new(10.0, 0.0, 0.0), FreqPair::new(0.0, 0.0), F0).unwrap_err();
        assert!(matches!(err, Error::DegenerateRange { .. }));
        assert!(LbfKernel::from_geometry(&g, Vec3::new(10.0, 0.0, 0.0), F0).is_err());
    }

    #[test]
    fn window_gates_on_the_common_point() {
        let g = airborne_gc();
        let p = Vec3::new(0.0, 0.0, 0.0);
        let w = doppler_window(&g, p, F0, &ApertureSpec::dwell(4.0, 4.0)).unwrap();
        let k = LbfKernel::from_geometry(&g, p, F0).unwrap();
        let inside = k.evaluate(FreqPair::new(0.0, w.fdc), Some(&w)).unwrap();
        assert_eq!(inside.window, 1.0);
        assert!((inside.total.norm() - inside.amplitude.norm()).abs() < 1e-12);
        let outside = k.evaluate(FreqPair::new(0.0, w.fdc + 2.0 * w.az_bandwidth), Some(&w)).unwrap();
        assert_eq!(outside.window, 0.0);
        assert_eq!(outside.total, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn grid_cells_equal_single_evaluations() {
        let g = airborne_gc();
        let p = Vec3::new(0.0, 0.0, 0.0);
        let k = LbfKernel::from_geometry(&g, p, F0).unwrap();
        let grid = evaluate_grid(&k, &[1e6], &[12.0], None);
        assert_eq!(grid.samples[(0, 0)], k.evaluate(FreqPair::new(1e6, 12.0), None).unwrap().total);
        let fs: Vec<f64> = (0..8).map(|i| -8e6 + 2e6 * i as f64).collect();
        let fts = [-7000.0, 0.0, 7000.0];
        let grid = evaluate_grid(&k, &fs, &fts, None);
        assert_eq!(grid.outside_support, 16);
        let zero_window = DopplerWindow { tau_cb: 100.0, tau_span: 0.0, fdc: 0.0, fdc_rate: 0.0, az_bandwidth: 0.0 };
        let grid = evaluate_grid(&k, &fs, &fts, Some(&zero_window));
        assert!(grid.samples.iter().all(|z| z.norm() == 0.0));
    }

    proptest! {
        #[test]
        fn common_point_lies_between_individual_points(
            f in -10e6f64..10e6, ft in -2000.0f64..2000.0, dx in -500.0f64..500.0, h in 1000.0f64..5000.0,
        ) {
            let rx = Trajectory::new(Vec3::new(0.0, -3000.0, 2400.0), Vec3::new(98.0, 0.0, 0.0));
            let tx = Trajectory::new(Vec3::new(dx, -3000.0, h), Vec3::new(95.0, 4.0, 0.0));
            let g = BistaticGeometry::new(tx, rx);
            let k = LbfKernel::from_geometry(&g, Vec3::new(0.0, 0.0, 0.0), F0).unwrap();
            let s = k.stationary_points(FreqPair::new(f, ft)).unwrap();
            prop_assert!(s.ddphi_t > 0.0 && s.ddphi_r > 0.0);
            let (lo, hi) = if s.tau_t < s.tau_r { (s.tau_t, s.tau_r) } else { (s.tau_r, s.tau_t) };
            prop_assert!(s.tau_common >= lo - 1e-12 && s.tau_common <= hi + 1e-12);
        }
    }
}
