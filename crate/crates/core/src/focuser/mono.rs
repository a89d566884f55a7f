//! Monostatic processor applied to bistatic data: the receiver track is
//! used for both platforms, so every bistatic term is ignored. Kept only as
//! a reference for how badly the monostatic assumption defocuses.

use crate::error::Result;
use crate::geometry::BistaticGeometry;
use crate::rawsim::RawDataGrid;

use super::block::{focus_tiles, lbf_models, BlockSpec, Stages};
use super::{output_grid, range_matched_filter, scene_doppler_centroid, to_spectrum, FocusContext, FocusDiagnostics, FocusedImage};

pub fn focus_monostatic_mismatch(raw: &RawDataGrid, ctx: &FocusContext) -> Result<FocusedImage> {
    ctx.geom.validate()?;
    ctx.radar.validate()?;
    let grid = output_grid(raw, ctx)?;
    // the data band follows the true geometry
    let fdc = scene_doppler_centroid(&grid, ctx)?;
    let mut spec = to_spectrum(raw, fdc);
    range_matched_filter(&mut spec, &ctx.radar);
    let mono = FocusContext { geom: BistaticGeometry::monostatic(ctx.geom.rx), ..*ctx };
    let (img, blocks) = focus_tiles(&spec, &grid, BlockSpec::default(), Stages::FULL, lbf_models(&mono))?;
    let outside_support = blocks.iter().map(|b| b.outside_support).sum();
    Ok(FocusedImage {
        samples: img,
        grid,
        az_speed: ctx.geom.rx.speed(),
        processor: "mono".into(),
        diagnostics: FocusDiagnostics { outside_support, fdc, blocks },
    })
}
