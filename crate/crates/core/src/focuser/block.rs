//! Blockwise two-stage scaled inversion.
//!
//! Inside a block the spectral phase of a target at receiver coordinates
//! `(Rc + r, τc + s)` is expanded about the block center `(Rc, τc)`:
//! `Φ(r, s) ≈ Φc + U·r + W·s`. After multiplying the spectrum by
//! `exp(+jΦc)`, the fits `U/2π ≈ u0(f_tau) + u1(f_tau)·f` and
//! `W/2π ≈ c0 + w_a·(f_tau − fdc) + w1·f` turn focusing into a range
//! scaled transform per Doppler row and one azimuth scaled transform per
//! range column. The `w1·f` coupling leaves a range walk proportional to
//! `s`, removed by a per-row range shift after the azimuth stage.

use std::f64::consts::PI;

use ndarray::{Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::{plan, Direction};
use crate::geometry::{ground_point, pca, BistaticParams, LookSide, PcaSolution, Trajectory};
use crate::lbf::{wrap, FreqPair, LbfKernel, MigrationFactor};
use crate::sfft::{cis_cycles, ScaledAxis, ScaledIdftPlan};
use crate::SPEED_OF_LIGHT;

use super::{FocusContext, OutputGrid, SpectrumGrid};

/// Minimum number of cells per block along either axis.
pub const MIN_BLOCK_BINS: usize = 8;
const MAX_CONDITION: f64 = 1e12;
const GHOSTS_PER_AXIS: usize = 5;

/// Range × azimuth tiling of the output grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockSpec {
    pub range_blocks: usize,
    pub az_blocks: usize,
}

impl Default for BlockSpec {
    fn default() -> Self {
        Self { range_blocks: 1, az_blocks: 1 }
    }
}

impl BlockSpec {
    pub fn new(range_blocks: usize, az_blocks: usize) -> Self {
        Self { range_blocks, az_blocks }
    }

    /// Fewest blocks keeping each within `max_range` meters and `max_az`
    /// seconds.
    pub fn auto(grid: &OutputGrid, max_range: f64, max_az: f64) -> Self {
        let r = (grid.n_range as f64 * grid.range_spacing / max_range).ceil().max(1.0) as usize;
        let a = (grid.n_azimuth as f64 * grid.tau_spacing / max_az).ceil().max(1.0) as usize;
        Self::new(r, a)
    }

    /// Half-open `(range, azimuth)` cell intervals in row-major block order.
    pub fn tiles(&self, grid: &OutputGrid) -> Result<Vec<((usize, usize), (usize, usize))>> {
        if self.range_blocks == 0 || self.az_blocks == 0 {
            return Err(Error::InvalidParameter("block counts must be at least 1".into()));
        }
        let edges = |n: usize, k: usize| -> Vec<usize> { (0..=k).map(|i| i * n / k).collect() };
        let re = edges(grid.n_range, self.range_blocks);
        let ae = edges(grid.n_azimuth, self.az_blocks);
        let mut out = Vec::new();
        for a in 0..self.az_blocks {
            for r in 0..self.range_blocks {
                let index = out.len();
                for bins in [re[r + 1] - re[r], ae[a + 1] - ae[a]] {
                    if bins < MIN_BLOCK_BINS {
                        return Err(Error::BlockTooNarrow { index, bins, min: MIN_BLOCK_BINS });
                    }
                }
                out.push(((re[r], re[r + 1]), (ae[a], ae[a + 1])));
            }
        }
        Ok(out)
    }
}

/// Linear model of the transmitter closest approach over a block:
/// `R0T = r0t_c + alpha_r·r + delta_r·s`, `τ0T = tau0t_c + gamma_tau·r + alpha_tau·s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockRegression {
    pub r0r_c: f64,
    pub tau0r_c: f64,
    pub r0t_c: f64,
    pub tau0t_c: f64,
    pub alpha_r: f64,
    pub delta_r: f64,
    pub alpha_tau: f64,
    pub gamma_tau: f64,
    /// RMS residuals over the ghost grid, m and s.
    pub residual_r0t: f64,
    pub residual_tau0t: f64,
    pub condition: f64,
}

impl BlockRegression {
    pub fn params_at(&self, r: f64, s: f64) -> BistaticParams {
        BistaticParams::from_pcas(
            PcaSolution {
                tau0: self.tau0t_c + self.gamma_tau * r + self.alpha_tau * s,
                r0: self.r0t_c + self.alpha_r * r + self.delta_r * s,
            },
            PcaSolution { tau0: self.tau0r_c + s, r0: self.r0r_c + r },
        )
    }
}

/// First-order scaling coefficients of a block. Range quantities are
/// quoted at the Doppler centroid.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ScalingParams {
    /// `u1` at the Doppler centroid, cycles/(m·Hz).
    pub u1: f64,
    /// `u0` at the Doppler centroid, cycles/m.
    pub u0: f64,
    /// Azimuth scale.
    pub w_a: f64,
    /// Range-frequency dependent azimuth shift, cycles/(s·Hz).
    pub w1: f64,
    /// Range walk per second of azimuth, m/s.
    pub walk_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockPlan {
    pub index: usize,
    pub range_cells: (usize, usize),
    pub az_cells: (usize, usize),
    pub center_r0r: f64,
    pub center_tau0r: f64,
    pub regression: Option<BlockRegression>,
    pub scaling: ScalingParams,
    pub outside_support: usize,
}

/// Spectral phase of a target at the block center and its derivatives
/// with respect to the receiver coordinates.
pub(crate) trait PhaseModel: Sync {
    /// `(Φ, ∂Φ/∂r, ∂Φ/∂s)` in rad, rad/m and rad/s.
    fn eval(&self, f: f64, f_tau: f64) -> Option<(f64, f64, f64)>;
}

/// Least-squares fit of the transmitter closest approach over a 5×5 grid of
/// ghost targets spanning the block.
pub(crate) fn regress_block(
    rx: &Trajectory,
    tx: &Trajectory,
    side: LookSide,
    center: (f64, f64),
    half_extent: (f64, f64),
) -> Result<BlockRegression> {
    let (rc, tc) = center;
    let (hr, hs) = half_extent;
    if !(hr > 0.0 && hs > 0.0) {
        return Err(Error::RegressionIllConditioned { condition: f64::INFINITY });
    }
    let p0 = ground_point(rx, side, rc, tc)?;
    let c0 = pca(tx, p0)?;
    let mut ata = [[0.0; 3]; 3];
    let mut atb_r = [0.0; 3];
    let mut atb_t = [0.0; 3];
    let mut rows = Vec::new();
    for i in 0..GHOSTS_PER_AXIS {
        for j in 0..GHOSTS_PER_AXIS {
            let x = -1.0 + 2.0 * i as f64 / (GHOSTS_PER_AXIS - 1) as f64;
            let y = -1.0 + 2.0 * j as f64 / (GHOSTS_PER_AXIS - 1) as f64;
            let (r, s) = (x * hr, y * hs);
            let p = ground_point(rx, side, rc + r, tc + s)?;
            let t = pca(tx, p)?;
            let a = [1.0, x, y];
            let (br, bt) = (t.r0 - c0.r0, t.tau0 - c0.tau0);
            for u in 0..3 {
                for v in 0..3 {
                    ata[u][v] += a[u] * a[v];
                }
                atb_r[u] += a[u] * br;
                atb_t[u] += a[u] * bt;
            }
            rows.push((a, br, bt));
        }
    }
    let eig = symmetric_eigenvalues(ata);
    let (lo, hi) = eig.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e.abs()), h.max(e.abs())));
    let condition = if lo > 0.0 { (hi / lo).sqrt() } else { f64::INFINITY };
    if !(condition <= MAX_CONDITION) {
        return Err(Error::RegressionIllConditioned { condition });
    }
    let cr = solve3(ata, atb_r).ok_or(Error::RegressionIllConditioned { condition })?;
    let ct = solve3(ata, atb_t).ok_or(Error::RegressionIllConditioned { condition })?;
    let n = rows.len() as f64;
    let (mut er, mut et) = (0.0, 0.0);
    for (a, br, bt) in &rows {
        let fr: f64 = (0..3).map(|u| a[u] * cr[u]).sum();
        let ft: f64 = (0..3).map(|u| a[u] * ct[u]).sum();
        er += (fr - br).powi(2);
        et += (ft - bt).powi(2);
    }
    Ok(BlockRegression {
        r0r_c: rc,
        tau0r_c: tc,
        r0t_c: c0.r0,
        tau0t_c: c0.tau0,
        alpha_r: cr[1] / hr,
        delta_r: cr[2] / hs,
        alpha_tau: ct[2] / hs,
        gamma_tau: ct[1] / hr,
        residual_r0t: (er / n).sqrt(),
        residual_tau0t: (et / n).sqrt(),
        condition,
    })
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for col in 0..3 {
        let piv = (col..3).max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))?;
        if m[piv][col] == 0.0 {
            return None;
        }
        m.swap(col, piv);
        for row in 0..3 {
            if row != col {
                let f = m[row][col] / m[col][col];
                for k in col..4 {
                    m[row][k] -= f * m[col][k];
                }
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Cyclic Jacobi sweep for a symmetric 3×3 matrix.
fn symmetric_eigenvalues(mut a: [[f64; 3]; 3]) -> [f64; 3] {
    for _ in 0..50 {
        let off = a[0][1].powi(2) + a[0][2].powi(2) + a[1][2].powi(2);
        if off < 1e-30 * (a[0][0].powi(2) + a[1][1].powi(2) + a[2][2].powi(2)).max(1e-300) {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            if a[p][q] == 0.0 {
                continue;
            }
            let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut r = [[0.0; 3]; 3];
            for i in 0..3 {
                r[i][i] = 1.0;
            }
            r[p][p] = c;
            r[q][q] = c;
            r[p][q] = s;
            r[q][p] = -s;
            // a ← rᵀ a r
            let mut tmp = [[0.0; 3]; 3];
            for i in 0..3 {
                for j in 0..3 {
                    tmp[i][j] = (0..3).map(|k| a[i][k] * r[k][j]).sum();
                }
            }
            for i in 0..3 {
                for j in 0..3 {
                    a[i][j] = (0..3).map(|k| r[k][i] * tmp[k][j]).sum();
                }
            }
        }
    }
    [a[0][0], a[1][1], a[2][2]]
}

/// LBF phase model of a block, with the transmitter closest approach taken
/// from the block regression. The derivatives of the quasi-monostatic
/// phase are analytic; those of the deformation phase are central
/// differences.
pub(crate) struct LbfBlockModel {
    pub reg: BlockRegression,
    kernel: LbfKernel,
    shifted: [LbfKernel; 4],
    h_r: f64,
    h_s: f64,
}

impl LbfBlockModel {
    pub fn new(reg: BlockRegression, speed_t: f64, speed_r: f64, f0: f64) -> Self {
        let (h_r, h_s) = (10.0, 1e-3);
        let k = |r: f64, s: f64| LbfKernel::new(reg.params_at(r, s), speed_t, speed_r, f0);
        Self { reg, kernel: k(0.0, 0.0), shifted: [k(h_r, 0.0), k(-h_r, 0.0), k(0.0, h_s), k(0.0, -h_s)], h_r, h_s }
    }
}

impl PhaseModel for LbfBlockModel {
    fn eval(&self, f: f64, f_tau: f64) -> Option<(f64, f64, f64)> {
        let fq = FreqPair::new(f, f_tau);
        let (psi1, psi2, _) = self.kernel.phases(fq).ok()?;
        let sft = MigrationFactor::new(self.kernel.f0, self.kernel.speed_t).sqrt(f, f_tau)?;
        let sfr = MigrationFactor::new(self.kernel.f0, self.kernel.speed_r).sqrt(f, f_tau)?;
        let psi2_at = |k: &LbfKernel| k.phases(fq).ok().map(|p| p.1);
        let [rp, rm, sp, sm] = &self.shifted;
        let d2r = (psi2_at(rp)? - psi2_at(rm)?) / (2.0 * self.h_r);
        let d2s = (psi2_at(sp)? - psi2_at(sm)?) / (2.0 * self.h_s);
        let g = &self.reg;
        let k = 2.0 * PI / SPEED_OF_LIGHT;
        let du = PI * f_tau * g.gamma_tau + k * (g.alpha_r * sft + sfr) + d2r;
        let dw = PI * f_tau * (1.0 + g.alpha_tau) + k * g.delta_r * sft + d2s;
        Some((psi1 + psi2, du, dw))
    }
}

/// Which compensation stages to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Stages {
    /// Azimuth scale and shift compensation; without it the azimuth
    /// transform is a plain inverse DFT.
    pub azimuth: bool,
    /// Range walk removal (requires `azimuth`).
    pub walk: bool,
}

impl Stages {
    pub const FULL: Stages = Stages { azimuth: true, walk: true };
    pub const RANGE_ONLY: Stages = Stages { azimuth: false, walk: false };
}

/// Focuses the whole grid with the model of one block; returns the image,
/// the scaling coefficients and the count of zeroed cells.
pub(crate) fn focus_block(
    spec: &SpectrumGrid,
    model: &dyn PhaseModel,
    grid: &OutputGrid,
    center: (f64, f64),
    stages: Stages,
) -> Result<(Array2<Complex64>, ScalingParams, usize)> {
    let (m_rows, n) = spec.samples.dim();
    let fdc = spec.fdc;
    let (rc, tc) = center;
    let m_c = (rc - grid.range_start) / grid.range_spacing;
    let j_c = (tc - grid.tau_start) / grid.tau_spacing;

    struct RowFit {
        data: Vec<Complex64>,
        u: Option<(f64, f64)>,
        w_normal: [[f64; 3]; 3],
        w_rhs: [f64; 3],
        missing: usize,
    }

    let x_scale = spec.prf;
    let f_scale = spec.fs;
    let rows: Vec<RowFit> = (0..m_rows)
        .into_par_iter()
        .map(|l| {
            let ft = spec.f_tau_axis[l];
            let mut data = vec![Complex64::new(0.0, 0.0); n];
            let (mut s0, mut s1, mut s2, mut su, mut sfu) = (0.0, 0.0, 0.0, 0.0, 0.0);
            let mut w_normal = [[0.0; 3]; 3];
            let mut w_rhs = [0.0; 3];
            let mut missing = 0;
            for k in 0..n {
                let d = spec.samples[(l, k)];
                if d == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let f = spec.f_axis[k];
                match model.eval(f, ft) {
                    Some((phi, du, dw)) => {
                        data[k] = d * Complex64::from_polar(1.0, wrap(phi));
                        let u = du / (2.0 * PI);
                        s0 += 1.0;
                        s1 += f;
                        s2 += f * f;
                        su += u;
                        sfu += f * u;
                        let a = [1.0, (ft - fdc) / x_scale, f / f_scale];
                        let w = dw / (2.0 * PI);
                        for p in 0..3 {
                            for q in 0..3 {
                                w_normal[p][q] += a[p] * a[q];
                            }
                            w_rhs[p] += a[p] * w;
                        }
                    }
                    None => missing += 1,
                }
            }
            let det = s0 * s2 - s1 * s1;
            let u = (s0 >= 2.0 && det > 0.0).then(|| {
                let u1 = (s0 * sfu - s1 * su) / det;
                ((su - u1 * s1) / s0, u1)
            });
            RowFit { data, u, w_normal, w_rhs, missing }
        })
        .collect();

    let mut wn = [[0.0; 3]; 3];
    let mut wr = [0.0; 3];
    let mut missing = 0;
    for r in &rows {
        for p in 0..3 {
            for q in 0..3 {
                wn[p][q] += r.w_normal[p][q];
            }
            wr[p] += r.w_rhs[p];
        }
        missing += r.missing;
    }
    let ill = Error::RegressionIllConditioned { condition: f64::INFINITY };
    let wc = solve3(wn, wr).ok_or(ill.clone())?;
    let w1 = wc[2] / f_scale;

    // range quantities at the Doppler centroid
    let u0_ref = model
        .eval(0.0, fdc)
        .map(|(_, du, _)| du / (2.0 * PI))
        .ok_or(Error::NoStationaryPoint { f: 0.0, f_tau: fdc })?;
    let l_ref = (0..m_rows)
        .filter(|&l| rows[l].u.is_some())
        .min_by(|&a, &b| (spec.f_tau_axis[a] - fdc).abs().total_cmp(&(spec.f_tau_axis[b] - fdc).abs()))
        .ok_or(Error::NoStationaryPoint { f: 0.0, f_tau: fdc })?;
    let u1_ref = rows[l_ref].u.map(|u| u.1).unwrap_or(0.0);

    // A walked target is range-compressed away from its true range, so the
    // row's range phase (u0 - u0_ref)·ρ is picked up at the walked cell.
    // That adds -(u0 - u0_ref)·w1/u1 cycles per second of azimuth offset to
    // each row, which the azimuth scale has to absorb.
    for r in &rows {
        if let Some((u0, u1)) = r.u {
            let c = -(u0 - u0_ref) * w1 / u1;
            for q in 0..3 {
                wr[q] += c * r.w_normal[0][q];
            }
        }
    }
    let wc = solve3(wn, wr).ok_or(ill)?;
    let w_a = wc[1] / x_scale;

    let df = spec.fs / n as f64;
    let kz = spec.f_axis.iter().position(|&f| f == 0.0).unwrap_or(n / 2) as f64;
    let nf = n as f64;
    let range_plan = ScaledIdftPlan::new(n);
    let mut img = Array2::<Complex64>::zeros((m_rows, n));
    img.axis_iter_mut(Axis(0))
        .into_par_iter()
        .zip(rows.par_iter())
        .try_for_each(|(mut out, row)| -> Result<()> {
            let Some((u0, u1)) = row.u else { return Ok(()) };
            let a = u1 * df * grid.range_spacing * nf;
            let b = -a * kz + (u0 - u0_ref) * grid.range_spacing * nf;
            let v: Vec<Complex64> = row
                .data
                .iter()
                .enumerate()
                .map(|(k, x)| x * cis_cycles(-(a * k as f64 + b) * m_c / nf))
                .collect();
            let res = range_plan.apply(&v, &ScaledAxis::bins(a, b, n))?;
            out.iter_mut().zip(res).for_each(|(d, s)| *d = s);
            Ok(())
        })?;

    let mf = m_rows as f64;
    let dft = spec.prf / mf;
    let k_az = dft * grid.tau_spacing * mf;
    let a2 = if stages.azimuth { w_a } else { 1.0 } * k_az;
    let b2 = a2 * (spec.f_tau_axis[0] - fdc) / dft;
    let az_plan = ScaledIdftPlan::new(m_rows);
    let pre: Vec<Complex64> = (0..m_rows).map(|l| cis_cycles(-(a2 * l as f64 + b2) * j_c / mf)).collect();
    let mut t = img.t().as_standard_layout().into_owned();
    t.axis_iter_mut(Axis(0)).into_par_iter().try_for_each(|mut col| -> Result<()> {
        let v: Vec<Complex64> = col.iter().zip(&pre).map(|(x, p)| x * p).collect();
        let res = az_plan.apply(&v, &ScaledAxis::bins(a2, b2, m_rows))?;
        col.iter_mut().zip(res).for_each(|(d, s)| *d = s);
        Ok(())
    })?;
    img.assign(&t.t());

    let walk_rate = if u1_ref != 0.0 { w1 / u1_ref } else { 0.0 };
    if stages.azimuth && stages.walk && walk_rate != 0.0 {
        let fwd = plan(n, Direction::Forward);
        let inv = plan(n, Direction::Inverse);
        let freqs = crate::fft::fftfreq(n, 1.0);
        img.axis_iter_mut(Axis(0)).into_par_iter().enumerate().for_each(|(j, mut row)| {
            let s = (j as f64 - j_c) * grid.tau_spacing;
            let cells = s * walk_rate / grid.range_spacing;
            let mut buf = row.to_vec();
            fwd.process(&mut buf);
            for (x, k) in buf.iter_mut().zip(&freqs) {
                *x *= cis_cycles(k * cells) / nf;
            }
            inv.process(&mut buf);
            row.iter_mut().zip(buf).for_each(|(d, s)| *d = s);
        });
    }

    let scaling = ScalingParams { u1: u1_ref, u0: u0_ref, w_a, w1, walk_rate };
    Ok((img, scaling, missing))
}

/// Runs `focus_block` for every tile and stitches the tiles.
pub(crate) fn focus_tiles<F>(
    spec: &SpectrumGrid,
    grid: &OutputGrid,
    blocks: BlockSpec,
    stages: Stages,
    mut model_for: F,
) -> Result<(Array2<Complex64>, Vec<BlockPlan>)>
where
    F: FnMut((f64, f64), (f64, f64)) -> Result<(Box<dyn PhaseModel>, Option<BlockRegression>)>,
{
    let tiles = blocks.tiles(grid)?;
    let mut out = Array2::zeros((grid.n_azimuth, grid.n_range));
    let mut plans = Vec::with_capacity(tiles.len());
    for (index, ((m0, m1), (j0, j1))) in tiles.into_iter().enumerate() {
        let m_mid = 0.5 * (m0 + m1 - 1) as f64;
        let j_mid = 0.5 * (j0 + j1 - 1) as f64;
        let center = (grid.range_at(m_mid), grid.tau_at(j_mid));
        let half = (0.5 * (m1 - m0) as f64 * grid.range_spacing, 0.5 * (j1 - j0) as f64 * grid.tau_spacing);
        let (model, regression) = model_for(center, half)?;
        let (img, scaling, outside_support) = focus_block(spec, model.as_ref(), grid, center, stages)?;
        out.slice_mut(ndarray::s![j0..j1, m0..m1]).assign(&img.slice(ndarray::s![j0..j1, m0..m1]));
        plans.push(BlockPlan {
            index,
            range_cells: (m0, m1),
            az_cells: (j0, j1),
            center_r0r: center.0,
            center_tau0r: center.1,
            regression,
            scaling,
            outside_support,
        });
    }
    Ok((out, plans))
}

/// Block model factory for the LBF-based processors.
pub(crate) fn lbf_models(
    ctx: &FocusContext,
) -> impl FnMut((f64, f64), (f64, f64)) -> Result<(Box<dyn PhaseModel>, Option<BlockRegression>)> + '_ {
    move |center, half| {
        let reg = regress_block(&ctx.geom.rx, &ctx.geom.tx, ctx.side, center, half)?;
        let model = LbfBlockModel::new(reg, ctx.geom.tx.speed(), ctx.geom.rx.speed(), ctx.radar.f0);
        Ok((Box::new(model) as Box<dyn PhaseModel>, Some(reg)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;

    fn grid(n_range: usize, n_azimuth: usize) -> OutputGrid {
        OutputGrid {
            range_start: 1000.0,
            range_spacing: 6.0,
            n_range,
            tau_start: 0.0,
            tau_spacing: 1e-3,
            n_azimuth,
        }
    }

    #[test]
    fn tiles_cover_the_grid_without_overlap() {
        let g = grid(100, 37);
        let tiles = BlockSpec::new(3, 2).tiles(&g).unwrap();
        assert_eq!(tiles.len(), 6);
        let mut hits = Array2::<u32>::zeros((37, 100));
        for ((m0, m1), (j0, j1)) in tiles {
            hits.slice_mut(ndarray::s![j0..j1, m0..m1]).mapv_inplace(|x| x + 1);
        }
        assert!(hits.iter().all(|&h| h == 1));
    }

    #[test]
    fn narrow_blocks_are_rejected() {
        let err = BlockSpec::new(20, 1).tiles(&grid(100, 37)).unwrap_err();
        assert!(matches!(err, Error::BlockTooNarrow { bins: 5, min: 8, .. }));
        assert!(BlockSpec::new(0, 1).tiles(&grid(100, 37)).is_err());
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        let e = symmetric_eigenvalues([[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 5.0]]);
        let mut e = e.to_vec();
        e.sort_by(f64::total_cmp);
        assert!((e[0] - 1.0).abs() < 1e-12 && (e[1] - 3.0).abs() < 1e-12 && (e[2] - 5.0).abs() < 1e-12);
    }

    #[test]
    fn regression_recovers_parallel_track_slopes() {
        // equal velocities on parallel tracks: the transmitter closest
        // approach time equals the receiver one
        let rx = Trajectory::new(Vec3::new(0.0, 200e3, 200e3), Vec3::new(7000.0, 0.0, 0.0));
        let tx = Trajectory::new(Vec3::new(0.0, 170e3, 200e3), Vec3::new(7000.0, 0.0, 0.0));
        let reg = regress_block(&rx, &tx, LookSide::Right, (283e3, 0.0), (2000.0, 0.2)).unwrap();
        assert!((reg.alpha_tau - 1.0).abs() < 1e-9);
        assert!(reg.gamma_tau.abs() < 1e-12);
        assert!(reg.delta_r.abs() < 1e-6);
        assert!(reg.alpha_r > 0.5 && reg.alpha_r < 1.0);
        assert!(reg.residual_r0t < 1.0);
        // a small numerical derivative confirms the range slope
        let d = |r: f64| {
            let p = ground_point(&rx, LookSide::Right, 283e3 + r, 0.0).unwrap();
            pca(&tx, p).unwrap().r0
        };
        assert!((reg.alpha_r - (d(1.0) - d(-1.0)) / 2.0).abs() < 1e-3);
    }

    #[test]
    fn zero_extent_block_is_ill_conditioned() {
        let rx = Trajectory::new(Vec3::new(0.0, 200e3, 200e3), Vec3::new(7000.0, 0.0, 0.0));
        let tx = rx;
        let err = regress_block(&rx, &tx, LookSide::Right, (283e3, 0.0), (2000.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::RegressionIllConditioned { .. }));
    }
}
