//! Platform trajectories, points of closest approach and the bistatic grade.
//!
//! Everything lives in a flat-Earth Cartesian frame: `x` is the nominal
//! along-track direction, `z` the altitude, the ground is `z = 0`.
//! Trajectories are straight lines, so each platform's range history is a
//! hyperbola `R(τ)² = r0² + |v|²(τ − τ0)²`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Straight-line, constant-velocity platform motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// Position at azimuth time zero.
    pub ref_position: Vec3,
    /// Velocity in m/s.
    pub velocity: Vec3,
}

impl Trajectory {
    pub fn new(ref_position: Vec3, velocity: Vec3) -> Self {
        Self { ref_position, velocity }
    }

    pub fn position(&self, tau: f64) -> Vec3 {
        self.ref_position + self.velocity * tau
    }

    pub fn speed(&self) -> f64 {
        self.velocity.norm()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.ref_position.is_finite() || !self.velocity.is_finite() {
            return Err(Error::InvalidParameter("trajectory has non-finite components".into()));
        }
        if self.speed() == 0.0 {
            return Err(Error::ZeroVelocity);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointTarget {
    pub position: Vec3,
    pub reflectivity: Complex64,
}

impl PointTarget {
    pub fn new(position: Vec3, reflectivity: Complex64) -> Self {
        Self { position, reflectivity }
    }
}

/// Time and range of closest approach of one platform to one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PcaSolution {
    pub tau0: f64,
    pub r0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BistaticGeometry {
    pub tx: Trajectory,
    pub rx: Trajectory,
}

impl BistaticGeometry {
    pub fn new(tx: Trajectory, rx: Trajectory) -> Self {
        Self { tx, rx }
    }

    pub fn monostatic(traj: Trajectory) -> Self {
        Self { tx: traj, rx: traj }
    }

    pub fn validate(&self) -> Result<()> {
        self.tx.validate()?;
        self.rx.validate()
    }

    /// One-way-sum delay `(R_T(τ) + R_R(τ)) / c`.
    pub fn bistatic_delay(&self, p: Vec3, tau: f64) -> f64 {
        (slant_range(&self.tx, p, tau) + slant_range(&self.rx, p, tau)) / SPEED_OF_LIGHT
    }
}

/// Closest-approach parameters of both platforms plus the bistatic grade.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BistaticParams {
    /// `tau0t - tau0r`
    pub a0: f64,
    /// `r0t / r0r`
    pub a2: f64,
    pub r0t: f64,
    pub tau0t: f64,
    pub r0r: f64,
    pub tau0r: f64,
}

impl BistaticParams {
    pub fn from_pcas(tx: PcaSolution, rx: PcaSolution) -> Self {
        Self {
            a0: tx.tau0 - rx.tau0,
            a2: tx.r0 / rx.r0,
            r0t: tx.r0,
            tau0t: tx.tau0,
            r0r: rx.r0,
            tau0r: rx.tau0,
        }
    }
}

pub fn slant_range(traj: &Trajectory, p: Vec3, tau: f64) -> f64 {
    (traj.position(tau) - p).norm()
}

/// Closest approach of a straight trajectory to `p`.
pub fn pca(traj: &Trajectory, p: Vec3) -> Result<PcaSolution> {
    let v2 = traj.velocity.dot(traj.velocity);
    if v2 == 0.0 {
        return Err(Error::ZeroVelocity);
    }
    let tau0 = (p - traj.ref_position).dot(traj.velocity) / v2;
    Ok(PcaSolution { tau0, r0: slant_range(traj, p, tau0) })
}

pub fn bistatic_params(geom: &BistaticGeometry, p: Vec3) -> Result<BistaticParams> {
    let tx = pca(&geom.tx, p)?;
    let rx = pca(&geom.rx, p)?;
    Ok(BistaticParams::from_pcas(tx, rx))
}

/// Azimuth extent of one platform's beam.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BeamExtent {
    /// Dwell time in seconds.
    Dwell(f64),
    /// Azimuth beamwidth in radians; converted to dwell as `r0·θ/|v|`.
    Beamwidth(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlatformBeam {
    pub extent: BeamExtent,
    /// Squint angle in radians (positive looks forward).
    #[serde(default)]
    pub squint: f64,
}

impl PlatformBeam {
    pub fn dwell(seconds: f64) -> Self {
        Self { extent: BeamExtent::Dwell(seconds), squint: 0.0 }
    }

    /// Visibility interval `[start, end]` of a point with the given PCA.
    pub fn visibility(&self, pca: PcaSolution, speed: f64) -> (f64, f64) {
        let dwell = match self.extent {
            BeamExtent::Dwell(t) => t,
            BeamExtent::Beamwidth(theta) => pca.r0 * theta / speed,
        };
        let center = pca.tau0 + pca.r0 * self.squint.tan() / speed;
        (center - 0.5 * dwell, center + 0.5 * dwell)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApertureSpec {
    pub tx: PlatformBeam,
    pub rx: PlatformBeam,
}

impl ApertureSpec {
    pub fn dwell(tx: f64, rx: f64) -> Self {
        Self { tx: PlatformBeam::dwell(tx), rx: PlatformBeam::dwell(rx) }
    }
}

/// Composite-beam illumination interval and its Doppler description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DopplerWindow {
    pub tau_cb: f64,
    pub tau_span: f64,
    pub fdc: f64,
    /// Doppler rate at `tau_cb` in Hz/s.
    pub fdc_rate: f64,
    pub az_bandwidth: f64,
}

impl DopplerWindow {
    pub fn contains(&self, tau: f64) -> bool {
        (tau - self.tau_cb).abs() <= 0.5 * self.tau_span
    }
}

fn range_rate(traj: &Trajectory, p: Vec3, tau: f64) -> (f64, f64) {
    // first and second derivative of |pos(τ) - p|
    let d = traj.position(tau) - p;
    let r = d.norm();
    let v = traj.velocity;
    let rd = d.dot(v) / r;
    let rdd = (v.dot(v) - rd * rd) / r;
    (rd, rdd)
}

pub fn doppler_window(
    geom: &BistaticGeometry,
    p: Vec3,
    f0: f64,
    aperture: &ApertureSpec,
) -> Result<DopplerWindow> {
    let tx = pca(&geom.tx, p)?;
    let rx = pca(&geom.rx, p)?;
    let (t0, t1) = aperture.tx.visibility(tx, geom.tx.speed());
    let (r0, r1) = aperture.rx.visibility(rx, geom.rx.speed());
    let start = t0.max(r0);
    let end = t1.min(r1);
    if end <= start {
        return Err(Error::EmptyOverlap);
    }
    let tau_cb = 0.5 * (start + end);
    let tau_span = end - start;
    let (dt, ddt) = range_rate(&geom.tx, p, tau_cb);
    let (dr, ddr) = range_rate(&geom.rx, p, tau_cb);
    let k = f0 / SPEED_OF_LIGHT;
    let fdc = -k * (dt + dr);
    let fdc_rate = -k * (ddt + ddr);
    Ok(DopplerWindow { tau_cb, tau_span, fdc, fdc_rate, az_bandwidth: fdc_rate.abs() * tau_span })
}

/// Which side of the receiver track the imaged ground lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LookSide {
    Left,
    #[default]
    Right,
}

/// Ground point (z = 0) whose receiver closest approach is `(r0r, tau0r)`.
pub fn ground_point(rx: &Trajectory, side: LookSide, r0r: f64, tau0r: f64) -> Result<Vec3> {
    let vhat = rx.velocity.normalized();
    let up = Vec3::new(0.0, 0.0, 1.0);
    let horiz = vhat.cross(up);
    if horiz.norm() < 1e-12 {
        return Err(Error::InvalidParameter("receiver velocity is vertical".into()));
    }
    // right of track for positive `e_c`
    let e_c = horiz.normalized();
    let e_d = e_c.cross(vhat);
    let p = rx.position(tau0r);
    if e_d.z.abs() < 1e-12 {
        return Err(Error::NoGroundPoint { r0r, tau0r });
    }
    let sin_phi = -p.z / (r0r * e_d.z);
    if !(sin_phi.abs() <= 1.0) {
        return Err(Error::NoGroundPoint { r0r, tau0r });
    }
    let cos_phi = (1.0 - sin_phi * sin_phi).sqrt();
    let cos_phi = match side {
        LookSide::Right => cos_phi,
        LookSide::Left => -cos_phi,
    };
    let mut g = p + (e_c * cos_phi + e_d * sin_phi) * r0r;
    g.z = 0.0;
    Ok(g)
}

/// Receiver coordinates `(R0R, τ0R)` of a point.
pub fn receiver_coords(rx: &Trajectory, p: Vec3) -> Result<(f64, f64)> {
    let s = pca(rx, p)?;
    Ok((s.r0, s.tau0))
}

/// Solve for the `R0R` at which the bistatic sum range `R0T + R0R` of the
/// ground point at `(R0R, tau0r)` equals `sum_range`.
pub fn r0r_for_sum_range(
    geom: &BistaticGeometry,
    side: LookSide,
    tau0r: f64,
    sum_range: f64,
) -> Result<f64> {
    let rx0 = geom.rx.position(tau0r);
    let vhat = geom.rx.velocity.normalized();
    let e_d = vhat.cross(Vec3::new(0.0, 0.0, 1.0)).normalized().cross(vhat);
    let mut lo = (rx0.z / e_d.z).abs() * (1.0 + 1e-12);
    let f = |r: f64| -> Result<f64> {
        let p = ground_point(&geom.rx, side, r, tau0r)?;
        let t = pca(&geom.tx, p)?;
        Ok(t.r0 + r - sum_range)
    };
    let mut hi = lo.max(1.0);
    while f(hi)? < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::NoGroundPoint { r0r: hi, tau0r });
        }
    }
    if f(lo)? > 0.0 {
        return Ok(lo);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj() -> Trajectory {
        Trajectory::new(Vec3::new(0.0, 0.0, 5000.0), Vec3::new(98.0, 0.0, 0.0))
    }

    #[test]
    fn slant_range_pythagoras() {
        let p = Vec3::new(0.0, 3000.0, 0.0);
        let r = slant_range(&traj(), p, 0.0);
        assert!((r - (3000.0f64.powi(2) + 5000.0f64.powi(2)).sqrt()).abs() < 1e-9);
        assert!((r - 5830.951894845301).abs() < 1e-9);
        let r10 = slant_range(&traj(), p, 10.0);
        let expect = (980.0f64.powi(2) + 3000.0f64.powi(2) + 5000.0f64.powi(2)).sqrt();
        assert!((r10 - expect).abs() < 1e-9);
    }

    #[test]
    fn pca_perpendicular() {
        let s = pca(&traj(), Vec3::new(1000.0, 3000.0, 0.0)).unwrap();
        assert!((s.tau0 - 1000.0 / 98.0).abs() < 1e-12);
        assert!((s.r0 - 5830.951894845301).abs() < 1e-9);
    }

    #[test]
    fn pca_on_flight_line_is_degenerate_but_permitted() {
        let s = pca(&traj(), Vec3::new(490.0, 0.0, 5000.0)).unwrap();
        assert!((s.tau0 - 5.0).abs() < 1e-12);
        assert_eq!(s.r0, 0.0);
    }

    #[test]
    fn zero_velocity_rejected() {
        let t = Trajectory::new(Vec3::default(), Vec3::default());
        assert_eq!(pca(&t, Vec3::new(1.0, 0.0, 0.0)), Err(Error::ZeroVelocity));
        assert_eq!(t.validate(), Err(Error::ZeroVelocity));
    }

    #[test]
    fn monostatic_limit() {
        let g = BistaticGeometry::monostatic(traj());
        let b = bistatic_params(&g, Vec3::new(200.0, 3000.0, 0.0)).unwrap();
        assert_eq!(b.a0, 0.0);
        assert_eq!(b.a2, 1.0);
    }

    #[test]
    fn tandem_trailing_transmitter_has_positive_a0() {
        let rx = traj();
        let tx = Trajectory::new(Vec3::new(-1000.0, 0.0, 5000.0), rx.velocity);
        let b = bistatic_params(&BistaticGeometry::new(tx, rx), Vec3::new(0.0, 3000.0, 0.0)).unwrap();
        assert!((b.a0 - 1000.0 / 98.0).abs() < 1e-12);
        assert!((b.a2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_squint_doppler_windows() {
        let rx = traj();
        let p = Vec3::new(300.0, 3000.0, 0.0);
        let mono = doppler_window(&BistaticGeometry::monostatic(rx), p, 10e9, &ApertureSpec::dwell(2.0, 2.0))
            .unwrap();
        assert!((mono.tau_cb - 300.0 / 98.0).abs() < 1e-12);
        assert!(mono.fdc.abs() < 1e-6);

        let tx = Trajectory::new(Vec3::new(-500.0, 0.0, 5000.0), rx.velocity);
        let g = BistaticGeometry::new(tx, rx);
        let w = doppler_window(&g, p, 10e9, &ApertureSpec::dwell(8.0, 8.0)).unwrap();
        let b = bistatic_params(&g, p).unwrap();
        assert!((w.tau_cb - 0.5 * (b.tau0t + b.tau0r)).abs() < 1e-12);
        assert!(w.fdc.abs() < 1e-6);
        assert!((w.tau_span - (8.0 - b.a0.abs())).abs() < 1e-9);
    }

    #[test]
    fn disjoint_beams_error() {
        let rx = traj();
        let tx = Trajectory::new(Vec3::new(-5000.0, 0.0, 5000.0), rx.velocity);
        let r = doppler_window(
            &BistaticGeometry::new(tx, rx),
            Vec3::new(0.0, 3000.0, 0.0),
            10e9,
            &ApertureSpec::dwell(1.0, 1.0),
        );
        assert_eq!(r, Err(Error::EmptyOverlap));
    }

    #[test]
    fn ground_point_inverts_receiver_coords() {
        let rx = Trajectory::new(Vec3::new(10.0, 20.0, 3000.0), Vec3::new(90.0, 20.0, 0.0));
        for side in [LookSide::Left, LookSide::Right] {
            let p = ground_point(&rx, side, 4500.0, 3.0).unwrap();
            assert_eq!(p.z, 0.0);
            let (r, t) = receiver_coords(&rx, p).unwrap();
            assert!((r - 4500.0).abs() < 1e-6);
            assert!((t - 3.0).abs() < 1e-9);
        }
        // right of +x track with z up is -y
        let rx = traj();
        let p = ground_point(&rx, LookSide::Right, 5830.951894845301, 0.0).unwrap();
        assert!((p.y + 3000.0).abs() < 1e-6);
        assert!(ground_point(&rx, LookSide::Right, 4000.0, 0.0).is_err());
    }

    #[test]
    fn sum_range_solver() {
        let rx = traj();
        let tx = Trajectory::new(Vec3::new(-800.0, 500.0, 5200.0), Vec3::new(97.0, 3.0, 0.0));
        let g = BistaticGeometry::new(tx, rx);
        let r = r0r_for_sum_range(&g, LookSide::Right, 1.0, 12_000.0).unwrap();
        let p = ground_point(&rx, LookSide::Right, r, 1.0).unwrap();
        let b = bistatic_params(&g, p).unwrap();
        assert!((b.r0t + b.r0r - 12_000.0).abs() < 1e-5);
    }
}
