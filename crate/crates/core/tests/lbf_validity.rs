use std::f64::consts::PI;

use bisar::geometry::{doppler_window, pca, BistaticGeometry, Vec3};
use bisar::focuser::{from_spectrum, range_matched_filter, to_spectrum};
use bisar::lbf::{evaluate_grid, wrap, LbfKernel};
use bisar::rawsim::{auto_grid, simulate};
use num_complex::Complex64;
use bisar::oracle::{central_grid, compare_lbf, numeric_spectrum, validity_report, OracleReport, DEFAULT_OVERSAMPLING};
use bisar::scenario::{presets, ScenarioConfig};
use bisar::SPEED_OF_LIGHT;

fn report_for(geom: &BistaticGeometry, cfg: &ScenarioConfig, p: Vec3) -> OracleReport {
    let w = doppler_window(geom, p, cfg.radar.f0, &cfg.aperture).unwrap();
    let (fa, ft) = central_grid(&cfg.radar, &w, 0.8, 9, 21);
    compare_lbf(geom, p, &cfg.radar, &w, &fa, &ft).unwrap()
}

fn report(cfg: &ScenarioConfig, index: usize) -> OracleReport {
    let p = cfg.scene().unwrap().targets[index].position;
    report_for(&cfg.geometry(), cfg, p)
}

/// Long-window report: the LBF error without the window-edge ripple.
fn sweep_report(cfg: &ScenarioConfig) -> f64 {
    let p = cfg.scene().unwrap().targets[0].position;
    validity_report(&cfg.geometry(), p, &cfg.radar, &cfg.aperture, STRETCH).unwrap().rms_phase_error
}

const STRETCH: f64 = 3.0;

fn monotone(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

#[test]
fn tandem_lbf_is_accurate() {
    let cfg = presets::tandem().with_desk();
    for i in 0..cfg.targets.len() {
        let r = report(&cfg, i);
        assert!(r.rms_phase_error < 0.05, "{}", r.rms_phase_error);
        assert!(r.support_fraction > 0.9);
    }
}

#[test]
fn airborne_grade_error_exceeds_tandem() {
    let tandem = report(&presets::tandem().with_desk(), 0);
    let air = report(&presets::airborne_gc().with_desk(), 0);
    println!("tandem {} airborne {}", tandem.rms_phase_error, air.rms_phase_error);
    assert!(air.rms_phase_error > tandem.rms_phase_error);
}

#[test]
fn error_grows_with_a2() {
    let base = presets::airborne_gc().with_desk();
    let errs: Vec<f64> = [1.0, 1.5, 2.0, 2.5, 3.0]
        .iter()
        .map(|&a2| sweep_report(&base.with_bistatic_grade(0, Some(0.0), Some(a2)).unwrap()))
        .collect();
    println!("a2 sweep {errs:?}");
    assert!(monotone(&errs), "{errs:?}");
    let tandem = sweep_report(&presets::tandem());
    println!("tandem {tandem}");
    assert!(errs[4] > tandem);
}

#[test]
fn error_grows_with_a0() {
    let base = presets::airborne_gc().with_desk();
    let errs: Vec<f64> = [0.0, -0.5, -1.0, -1.5, -2.0]
        .iter()
        .map(|&a0| sweep_report(&base.with_bistatic_grade(0, Some(a0), Some(1.2)).unwrap()))
        .collect();
    println!("a0 sweep {errs:?}");
    assert!(monotone(&errs), "{errs:?}");
}

#[test]
fn report_is_symmetric_under_platform_exchange() {
    let cfg = presets::airborne_gc().with_desk();
    let p = cfg.scene().unwrap().targets[0].position;
    let g = cfg.geometry();
    let a = report_for(&g, &cfg, p);
    let b = report_for(&BistaticGeometry::new(g.rx, g.tx), &cfg, p);
    assert!((a.rms_phase_error - b.rms_phase_error).abs() < 1e-6, "{} {}", a.rms_phase_error, b.rms_phase_error);
    assert!((a.support_fraction - b.support_fraction).abs() < 1e-12);
}

/// Classical monostatic point-target spectrum by stationary phase.
fn monostatic_phase(r0: f64, tau0: f64, v: f64, f0: f64, f: f64, ft: f64) -> f64 {
    let ff = f + f0;
    let d = (ff * ff - (SPEED_OF_LIGHT * ft / (2.0 * v)).powi(2)).sqrt();
    -4.0 * PI * r0 * d / SPEED_OF_LIGHT - 2.0 * PI * ft * tau0 - PI / 4.0
}

#[test]
fn numeric_monostatic_spectrum_matches_closed_form() {
    let cfg = presets::airborne_gc().with_desk();
    let g = BistaticGeometry::monostatic(cfg.receiver);
    let p = Vec3::new(0.0, 0.0, 0.0);
    let w = doppler_window(&g, p, cfg.radar.f0, &cfg.aperture).unwrap();
    let (fa, ft) = central_grid(&cfg.radar, &w, 0.6, 7, 15);
    let num = numeric_spectrum(&g, p, cfg.radar.f0, &w, &fa, &ft, DEFAULT_OVERSAMPLING);
    let c = pca(&cfg.receiver, p).unwrap();
    let v = cfg.receiver.speed();
    // the reference phase is known up to a constant; remove the mean offset
    let diffs: Vec<f64> = ft
        .iter()
        .enumerate()
        .flat_map(|(l, &t)| {
            let num = &num;
            fa.iter()
                .enumerate()
                .map(move |(k, &f)| wrap(num[(l, k)].arg() - monostatic_phase(c.r0, c.tau0, v, cfg.radar.f0, f, t)))
        })
        .collect();
    let mean = diffs.iter().map(|d| wrap(d - diffs[0])).sum::<f64>() / diffs.len() as f64 + diffs[0];
    let rms = (diffs.iter().map(|d| wrap(d - mean).powi(2)).sum::<f64>() / diffs.len() as f64).sqrt();
    assert!(rms < 0.05, "{rms}");
    assert!(wrap(mean).abs() < 0.05, "{mean}");
}

/// Range-compressed spectrum of a single simulated target multiplied by the
/// conjugate LBF phase and transformed back; returns the peak's cyclic
/// distance from the origin in cells and the
/// fraction of the energy in the 3x3 cells around it. `ideal` keeps only the
/// magnitudes, which is the best any phase law can do.
fn lbf_compression(cfg: &ScenarioConfig, kernel_geom: &BistaticGeometry, ideal: bool) -> ((usize, usize), f64) {
    let g = cfg.geometry();
    let scene = cfg.scene().unwrap();
    let p = scene.targets[0].position;
    let grid = auto_grid(&g, &scene, &cfg.radar, &cfg.aperture).unwrap();
    let raw = simulate(&g, &scene, &cfg.radar, &cfg.aperture, &grid).unwrap();
    let w = doppler_window(&g, p, cfg.radar.f0, &cfg.aperture).unwrap();
    let mut spec = to_spectrum(&raw, w.fdc);
    range_matched_filter(&mut spec, &cfg.radar);
    let kernel = LbfKernel::from_geometry(kernel_geom, p, cfg.radar.f0).unwrap();
    let lbf = evaluate_grid(&kernel, &spec.f_axis, &spec.f_tau_axis, Some(&w));
    spec.samples.zip_mut_with(&lbf.samples, |x, l| {
        *x = match (l.norm() > 0.0, ideal) {
            (false, _) => Complex64::new(0.0, 0.0),
            (true, true) => Complex64::new(x.norm(), 0.0),
            (true, false) => *x * Complex64::from_polar(1.0, -l.arg()),
        };
    });
    // the spectrum is referenced to absolute time, so a matched phase
    // leaves an impulse at t = 0, τ = 0
    spec.t0 = 0.0;
    spec.tau_start = 0.0;
    let out = from_spectrum(&spec).samples;
    let (m, n) = out.dim();
    let (j, k) = out.indexed_iter().max_by(|a, b| a.1.norm().total_cmp(&b.1.norm())).unwrap().0;
    let total: f64 = out.iter().map(|z| z.norm_sqr()).sum();
    let mut near = 0.0;
    for dj in [m - 1, 0, 1] {
        for dk in [n - 1, 0, 1] {
            near += out[((j + dj) % m, (k + dk) % n)].norm_sqr();
        }
    }
    ((j.min(m - j), k.min(n - k)), near / total)
}

#[test]
fn lbf_grid_compresses_simulated_data_to_a_point() {
    let cfg = presets::airborne_gc().with_desk();
    let ((j, k), frac) = lbf_compression(&cfg, &cfg.geometry(), false);
    let (_, best) = lbf_compression(&cfg, &cfg.geometry(), true);
    println!("peak ({j}, {k}) energy fraction {frac}, ideal {best}");
    assert!(j <= 1 && k <= 1, "({j}, {k})");
    assert!(frac > 0.95 * best, "{frac} {best}");
    // the receiver-only (monostatic) phase does not compress the bistatic data
    let (_, mono) = lbf_compression(&cfg, &BistaticGeometry::monostatic(cfg.receiver), false);
    println!("monostatic kernel energy fraction {mono}");
    assert!(mono < 0.5 * frac);
}
