use bisar::oracle::{backproject, patch_grid};
use bisar::rawsim::{auto_grid, range_compress, simulate, RawDataGrid};
use bisar::scenario::presets;
use num_complex::Complex64;

#[test]
fn image_does_not_depend_on_receive_window_start() {
    let cfg = presets::airborne_gc().with_desk();
    let (g, ctx) = (cfg.geometry(), cfg.context());
    let scene = cfg.scene().unwrap();
    let grid = auto_grid(&g, &scene, &cfg.radar, &cfg.aperture).unwrap();
    let mut early = grid;
    early.t0 -= 37.0 / cfg.radar.fs;
    early.n_range += 48;
    let a = simulate(&g, &scene, &cfg.radar, &cfg.aperture, &grid).unwrap();
    let b = simulate(&g, &scene, &cfg.radar, &cfg.aperture, &early).unwrap();
    let truth = cfg.truths().unwrap()[0];
    let patch = patch_grid(&a, truth, 8);
    let ia = backproject(&range_compress(&a, &cfg.radar), &ctx, &patch).unwrap();
    let ib = backproject(&range_compress(&b, &cfg.radar), &ctx, &patch).unwrap();
    let peak = ia.samples.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = (&ia.samples - &ib.samples).iter().map(|z| z.norm()).fold(0.0, f64::max);
    // the longer window changes the cyclic range compression and the
    // upsampling lengths, which moves the image by a few 1e-4 of the peak;
    // a bookkeeping error would be of order one
    assert!(diff < 1e-3 * peak, "{diff} {peak}");
}

#[test]
fn zero_data_gives_zero_image() {
    let cfg = presets::airborne_gc().with_desk();
    let scene = cfg.scene().unwrap();
    let grid = auto_grid(&cfg.geometry(), &scene, &cfg.radar, &cfg.aperture).unwrap();
    let mut raw = simulate(&cfg.geometry(), &scene, &cfg.radar, &cfg.aperture, &grid).unwrap();
    raw.samples.fill(Complex64::new(0.0, 0.0));
    let zero: RawDataGrid = range_compress(&raw, &cfg.radar);
    let img = backproject(&zero, &cfg.context(), &patch_grid(&raw, cfg.truths().unwrap()[0], 4)).unwrap();
    assert!(img.samples.iter().all(|z| z.norm() == 0.0));
}
