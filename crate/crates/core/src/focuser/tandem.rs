//! Tandem processor: transmitter and receiver on one track with a fixed
//! along-track baseline `d`.
//!
//! With equal closest-approach ranges the deformation phase reduces to
//! `π d² F^(3/2) / (2 c R0 (f+f0)²)`, approximated by `π d² F^(1/2) / (2 c R0)`.
//! Linearizing `1/R0` about the reference range folds it into the
//! monostatic phase as an effective range
//! `R_ref + d²/(8 R_ref) + r·(1 − d²/(8 R_ref²))`. The azimuth reference is
//! the baseline midpoint, `τ0R + a0/2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::BistaticGeometry;
use crate::lbf::MigrationFactor;
use crate::rawsim::RawDataGrid;
use crate::SPEED_OF_LIGHT;

use super::block::{focus_tiles, BlockSpec, PhaseModel, Stages};
use super::{output_grid, range_matched_filter, scene_doppler_centroid, to_spectrum, FocusContext, FocusDiagnostics, FocusedImage};

const REL_TOL: f64 = 1e-9;

/// Signed along-track baseline, positive when the transmitter trails.
pub fn tandem_baseline(geom: &BistaticGeometry) -> Result<f64> {
    geom.validate()?;
    let (vt, vr) = (geom.tx.velocity, geom.rx.velocity);
    let v = vr.norm();
    if (vt - vr).norm() > REL_TOL * v {
        return Err(Error::TandemAssumptionViolated(format!(
            "velocities differ: |v_t - v_r| = {:.3e} m/s",
            (vt - vr).norm()
        )));
    }
    let b = geom.rx.ref_position - geom.tx.ref_position;
    let cross = b.cross(vr).norm() / v;
    if cross > 1e-6 * b.norm().max(1.0) {
        return Err(Error::TandemAssumptionViolated(format!(
            "baseline is not along-track: {cross:.3e} m cross-track offset"
        )));
    }
    Ok(b.dot(vr) / v)
}

pub(crate) struct TandemModel {
    f0: f64,
    speed: f64,
    r_ref: f64,
    tau_ref: f64,
    a0: f64,
    d: f64,
}

impl PhaseModel for TandemModel {
    fn eval(&self, f: f64, f_tau: f64) -> Option<(f64, f64, f64)> {
        let sf = MigrationFactor::new(self.f0, self.speed).sqrt(f, f_tau)?;
        let k = 4.0 * PI / SPEED_OF_LIGHT;
        let dd = self.d * self.d / (8.0 * self.r_ref);
        let phi = k * sf * (self.r_ref + dd) + 2.0 * PI * f_tau * (self.tau_ref + 0.5 * self.a0);
        let du = k * sf * (1.0 - dd / self.r_ref);
        Some((phi, du, 2.0 * PI * f_tau))
    }
}

pub fn focus_tandem(raw: &RawDataGrid, ctx: &FocusContext) -> Result<FocusedImage> {
    let d = tandem_baseline(&ctx.geom)?;
    focus_with_baseline(raw, ctx, d)
}

/// Runs the tandem processor without checking its assumptions, using the
/// along-track component of the baseline. The result is only as good as
/// the geometry is close to a tandem pair.
pub fn focus_tandem_unchecked(raw: &RawDataGrid, ctx: &FocusContext) -> Result<FocusedImage> {
    ctx.geom.validate()?;
    let vr = ctx.geom.rx.velocity;
    let d = (ctx.geom.rx.ref_position - ctx.geom.tx.ref_position).dot(vr) / vr.norm();
    focus_with_baseline(raw, ctx, d)
}

fn focus_with_baseline(raw: &RawDataGrid, ctx: &FocusContext, d: f64) -> Result<FocusedImage> {
    ctx.radar.validate()?;
    let grid = output_grid(raw, ctx)?;
    let fdc = scene_doppler_centroid(&grid, ctx)?;
    let mut spec = to_spectrum(raw, fdc);
    range_matched_filter(&mut spec, &ctx.radar);
    let speed = ctx.geom.rx.speed();
    let (img, blocks) = focus_tiles(&spec, &grid, BlockSpec::default(), Stages::FULL, |center, _| {
        let model = TandemModel { f0: ctx.radar.f0, speed, r_ref: center.0, tau_ref: center.1, a0: d / speed, d };
        Ok((Box::new(model) as Box<dyn PhaseModel>, None))
    })?;
    let outside_support = blocks.iter().map(|b| b.outside_support).sum();
    Ok(FocusedImage {
        samples: img,
        grid,
        az_speed: speed,
        processor: "tandem".into(),
        diagnostics: FocusDiagnostics { outside_support, fdc, blocks },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Trajectory, Vec3};

    #[test]
    fn baseline_sign_and_rejections() {
        let v = Vec3::new(7000.0, 0.0, 0.0);
        let rx = Trajectory::new(Vec3::new(0.0, 1.0, 2.0), v);
        let tx = Trajectory::new(Vec3::new(-1000.0, 1.0, 2.0), v);
        assert!((tandem_baseline(&BistaticGeometry::new(tx, rx)).unwrap() - 1000.0).abs() < 1e-9);
        let off = Trajectory::new(Vec3::new(-1000.0, 50.0, 2.0), v);
        assert!(matches!(
            tandem_baseline(&BistaticGeometry::new(off, rx)),
            Err(Error::TandemAssumptionViolated(_))
        ));
        let fast = Trajectory::new(Vec3::new(-1000.0, 1.0, 2.0), Vec3::new(7100.0, 0.0, 0.0));
        assert!(matches!(
            tandem_baseline(&BistaticGeometry::new(fast, rx)),
            Err(Error::TandemAssumptionViolated(_))
        ));
        assert_eq!(tandem_baseline(&BistaticGeometry::monostatic(rx)).unwrap(), 0.0);
    }

    #[test]
    fn migration_substitution_error_is_small_for_spaceborne_tandem() {
        // |F^(3/2) − (f+f0)² F^(1/2)| / F^(3/2) over the processed band
        let m = MigrationFactor::new(5.16e9, 7000.0);
        let mut worst: f64 = 0.0;
        for i in 0..=40 {
            let f = -20e6 + 1e6 * i as f64;
            for j in 0..=50 {
                let ft = -1250.0 + 50.0 * j as f64;
                let exact = m.pow_3_2(f, ft).unwrap();
                let approx = (f + 5.16e9).powi(2) * m.sqrt(f, ft).unwrap();
                worst = worst.max((exact - approx).abs() / exact);
            }
        }
        assert!(worst < 1e-2, "{worst}");
    }
}
