//! General-case processor: arbitrary straight tracks and speeds. The scene
//! is tiled in range and azimuth; each tile gets its own regression of the
//! transmitter closest approach over the receiver coordinates.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rawsim::RawDataGrid;

use super::block::{focus_tiles, lbf_models, BlockSpec, Stages};
use super::{output_grid, range_matched_filter, scene_doppler_centroid, to_spectrum, FocusContext, FocusDiagnostics, FocusedImage};

pub const DEFAULT_BLOCK_RANGE: f64 = 2000.0;
pub const DEFAULT_BLOCK_AZIMUTH: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct GcOptions {
    /// Range × azimuth tiling; `None` picks the fewest blocks no larger
    /// than 2 km by 1 s.
    pub blocks: Option<BlockSpec>,
    /// Stop after the range-direction compensation; azimuth scale, shift
    /// and range walk stay uncorrected.
    pub stage1_only: bool,
}

pub fn focus_gc(raw: &RawDataGrid, ctx: &FocusContext, opts: GcOptions) -> Result<FocusedImage> {
    ctx.geom.validate()?;
    ctx.radar.validate()?;
    let grid = output_grid(raw, ctx)?;
    let fdc = scene_doppler_centroid(&grid, ctx)?;
    let mut spec = to_spectrum(raw, fdc);
    range_matched_filter(&mut spec, &ctx.radar);
    let stages = if opts.stage1_only { Stages::RANGE_ONLY } else { Stages::FULL };
    let tiling = opts.blocks.unwrap_or_else(|| BlockSpec::auto(&grid, DEFAULT_BLOCK_RANGE, DEFAULT_BLOCK_AZIMUTH));
    let (img, blocks) = focus_tiles(&spec, &grid, tiling, stages, lbf_models(ctx))?;
    let outside_support = blocks.iter().map(|b| b.outside_support).sum();
    Ok(FocusedImage {
        samples: img,
        grid,
        az_speed: ctx.geom.rx.speed(),
        processor: if opts.stage1_only { "gc-stage1".into() } else { "gc".into() },
        diagnostics: FocusDiagnostics { outside_support, fdc, blocks },
    })
}
