//! Translationally invariant processor: parallel tracks with equal
//! velocity vectors. The closest-approach offset between the platforms does
//! not change along azimuth, so the scene is split into range blocks only;
//! in each, the transmitter range is linearized over the receiver range and
//! the deformation phase of the block center is compensated.

use crate::error::{Error, Result};
use crate::geometry::BistaticGeometry;
use crate::rawsim::RawDataGrid;

use super::block::{focus_tiles, lbf_models, BlockSpec, Stages};
use super::{output_grid, range_matched_filter, scene_doppler_centroid, to_spectrum, FocusContext, FocusDiagnostics, FocusedImage};

pub(crate) fn check_ti(geom: &BistaticGeometry) -> Result<()> {
    geom.validate()?;
    let (vt, vr) = (geom.tx.velocity, geom.rx.velocity);
    if (vt - vr).norm() > 1e-9 * vr.norm() {
        return Err(Error::TIAssumptionViolated(format!(
            "velocity vectors differ: |v_t - v_r| = {:.3e} m/s",
            (vt - vr).norm()
        )));
    }
    Ok(())
}

pub fn focus_ti(raw: &RawDataGrid, ctx: &FocusContext, n_range_blocks: usize) -> Result<FocusedImage> {
    check_ti(&ctx.geom)?;
    focus_ti_unchecked(raw, ctx, n_range_blocks)
}

/// Runs the processor without checking that the velocity vectors agree.
/// The per-block regression still follows the true geometry, but azimuth
/// variation of the transmitter closest approach is not tiled.
pub fn focus_ti_unchecked(raw: &RawDataGrid, ctx: &FocusContext, n_range_blocks: usize) -> Result<FocusedImage> {
    ctx.geom.validate()?;
    ctx.radar.validate()?;
    if n_range_blocks == 0 {
        return Err(Error::InvalidParameter("at least one range block is required".into()));
    }
    let grid = output_grid(raw, ctx)?;
    let fdc = scene_doppler_centroid(&grid, ctx)?;
    let mut spec = to_spectrum(raw, fdc);
    range_matched_filter(&mut spec, &ctx.radar);
    let blocks = BlockSpec::new(n_range_blocks, 1);
    let (img, blocks) = focus_tiles(&spec, &grid, blocks, Stages::FULL, lbf_models(ctx))?;
    let outside_support = blocks.iter().map(|b| b.outside_support).sum();
    Ok(FocusedImage {
        samples: img,
        grid,
        az_speed: ctx.geom.rx.speed(),
        processor: "ti".into(),
        diagnostics: FocusDiagnostics { outside_support, fdc, blocks },
    })
}
