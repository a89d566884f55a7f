//! Scenario configuration: geometry, radar, scene, aperture and processing
//! options in one TOML document, plus the built-in scenarios.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focuser::FocusContext;
use crate::geometry::{
    ground_point, pca, receiver_coords, ApertureSpec, BeamExtent, BistaticGeometry, LookSide, PlatformBeam,
    PointTarget, Trajectory, Vec3,
};
use crate::rawsim::{RadarParams, Scene};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Tandem,
    Ti,
    #[default]
    Gc,
    Mono,
    Backprojection,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tandem" => Ok(Mode::Tandem),
            "ti" => Ok(Mode::Ti),
            "gc" => Ok(Mode::Gc),
            "mono" => Ok(Mode::Mono),
            "backprojection" => Ok(Mode::Backprojection),
            _ => Err(Error::Config(format!("unknown mode '{s}' (tandem, ti, gc, mono, backprojection)"))),
        }
    }
}

/// A point target given either by its ground position or by its receiver
/// closest approach `(r0r, tau0r)` on the ground plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec3>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r0r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau0r: Option<f64>,
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Reflectivity phase, rad.
    #[serde(default)]
    pub phase: f64,
}

fn one() -> f64 {
    1.0
}

impl TargetSpec {
    pub fn at_receiver(r0r: f64, tau0r: f64, amplitude: f64) -> Self {
        Self { name: None, position: None, r0r: Some(r0r), tau0r: Some(tau0r), amplitude, phase: 0.0 }
    }

    pub fn at_position(position: Vec3, amplitude: f64) -> Self {
        Self { name: None, position: Some(position), r0r: None, tau0r: None, amplitude, phase: 0.0 }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let by_rx = (self.r0r.is_some(), self.tau0r.is_some());
        match (self.position.is_some(), by_rx) {
            (true, (false, false)) | (false, (true, true)) => {}
            _ => {
                return Err(Error::Config(format!(
                    "target {index}: give either `position` or both `r0r` and `tau0r`"
                )))
            }
        }
        if !(self.amplitude.is_finite() && self.phase.is_finite()) {
            return Err(Error::Config(format!("target {index}: non-finite reflectivity")));
        }
        Ok(())
    }

    pub fn reflectivity(&self) -> Complex64 {
        Complex64::from_polar(self.amplitude, self.phase)
    }

    pub fn resolve(&self, rx: &Trajectory, side: LookSide) -> Result<PointTarget> {
        let p = match (self.position, self.r0r, self.tau0r) {
            (Some(p), _, _) => p,
            (None, Some(r), Some(t)) => ground_point(rx, side, r, t)?,
            _ => return Err(Error::Config("target location is incomplete".into())),
        };
        Ok(PointTarget::new(p, self.reflectivity()))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FocusConfig {
    #[serde(default)]
    pub mode: Mode,
    /// `[range, azimuth]` block counts; automatic when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blocks: Option<[usize; 2]>,
    #[serde(default)]
    pub stage1_only: bool,
}

/// Reduced settings selected with `--desk`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeskPreset {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aperture: Option<ApertureSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radar: Option<RadarParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<TargetSpec>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub image: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub description: String,
    pub radar: RadarParams,
    pub transmitter: Trajectory,
    pub receiver: Trajectory,
    #[serde(default)]
    pub side: LookSide,
    pub aperture: ApertureSpec,
    #[serde(default)]
    pub focus: FocusConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub desk: Option<DeskPreset>,
    #[serde(default)]
    pub targets: Vec<TargetSpec>,
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| Error::Config(format!("{}: {e}", self.name));
        self.radar.validate().map_err(cfg)?;
        self.transmitter.validate().map_err(cfg)?;
        self.receiver.validate().map_err(cfg)?;
        for (who, beam) in [("transmitter", self.aperture.tx), ("receiver", self.aperture.rx)] {
            let v = match beam.extent {
                BeamExtent::Dwell(t) | BeamExtent::Beamwidth(t) => t,
            };
            if !(v.is_finite() && v > 0.0 && beam.squint.is_finite()) {
                return Err(Error::Config(format!("{who} beam extent must be positive")));
            }
        }
        if let Some([r, a]) = self.focus.blocks {
            if r == 0 || a == 0 {
                return Err(Error::Config("block counts must be at least 1".into()));
            }
        }
        for (i, t) in self.targets.iter().enumerate() {
            t.validate(i)?;
        }
        if let Some(desk) = &self.desk {
            if let Some(r) = &desk.radar {
                r.validate().map_err(cfg)?;
            }
            for (i, t) in desk.targets.iter().flatten().enumerate() {
                t.validate(i)?;
            }
        }
        Ok(())
    }

    /// Copy with the desk preset applied, if there is one.
    pub fn with_desk(&self) -> Self {
        let mut c = self.clone();
        if let Some(d) = c.desk.take() {
            c.aperture = d.aperture.unwrap_or(c.aperture);
            c.radar = d.radar.unwrap_or(c.radar);
            c.targets = d.targets.unwrap_or(c.targets);
        }
        c
    }

    pub fn geometry(&self) -> BistaticGeometry {
        BistaticGeometry::new(self.transmitter, self.receiver)
    }

    pub fn context(&self) -> FocusContext {
        FocusContext { geom: self.geometry(), radar: self.radar, aperture: self.aperture, side: self.side }
    }

    /// Resolved scene; an empty scene is a configuration error.
    pub fn scene(&self) -> Result<Scene> {
        if self.targets.is_empty() {
            return Err(Error::Config(format!("{}: scene has no targets", self.name)));
        }
        let targets = self
            .targets
            .iter()
            .map(|t| t.resolve(&self.receiver, self.side))
            .collect::<Result<Vec<_>>>()?;
        Ok(Scene { targets })
    }

    /// Receiver closest approach `(r0r, tau0r)` of every target.
    pub fn truths(&self) -> Result<Vec<(f64, f64)>> {
        self.scene()?.targets.iter().map(|t| receiver_coords(&self.receiver, t.position)).collect()
    }

    /// Moves the transmitter so that target `index` sees the given
    /// bistatic grade: `a0 = τ0T − τ0R` and `a2 = R0T / R0R`. The
    /// transmitter velocity and closest-approach direction are kept.
    pub fn with_bistatic_grade(&self, index: usize, a0: Option<f64>, a2: Option<f64>) -> Result<Self> {
        let scene = self.scene()?;
        let p = scene
            .targets
            .get(index)
            .ok_or_else(|| Error::Config(format!("no target {index} to sweep around")))?
            .position;
        let tx = pca(&self.transmitter, p)?;
        let rx = pca(&self.receiver, p)?;
        let offset = self.transmitter.position(tx.tau0) - p;
        let r0t = a2.map_or(tx.r0, |a| a * rx.r0);
        let tau0t = a0.map_or(tx.tau0, |a| rx.tau0 + a);
        if !(r0t > 0.0 && tau0t.is_finite()) {
            return Err(Error::Config("bistatic grade gives a degenerate transmitter".into()));
        }
        let v = self.transmitter.velocity;
        let mut c = self.clone();
        c.transmitter = Trajectory::new(p + offset * (r0t / tx.r0) - v * tau0t, v);
        Ok(c)
    }
}

/// Built-in scenarios. Where the tables leave the geometry open, the
/// completions are chosen to meet their stated constraints.
pub mod presets {
    use super::*;

    fn beam(dwell: f64, squint_deg: f64) -> PlatformBeam {
        PlatformBeam { extent: BeamExtent::Dwell(dwell), squint: squint_deg.to_radians() }
    }

    fn aperture(dwell: f64, squint_deg: f64) -> ApertureSpec {
        ApertureSpec { tx: beam(dwell, squint_deg), rx: beam(dwell, squint_deg) }
    }

    fn desk(aperture: ApertureSpec, targets: Option<Vec<TargetSpec>>) -> Option<DeskPreset> {
        Some(DeskPreset { aperture: Some(aperture), radar: None, targets })
    }

    /// Spaceborne altitude used by the satellite scenarios, m.
    pub const ORBIT_HEIGHT: f64 = 150e3;

    fn spaceborne_receiver(speed: f64) -> Trajectory {
        // 45° off-nadir, right-looking at the origin
        Trajectory::new(Vec3::new(0.0, ORBIT_HEIGHT, ORBIT_HEIGHT), Vec3::new(speed, 0.0, 0.0))
    }

    fn spaceborne_radar(bandwidth: f64, prf: f64) -> RadarParams {
        RadarParams::with_oversampling(5.16e9, bandwidth, 8.5e-6, prf, 1.2)
    }

    /// Airborne general case: equal speeds, tracks 2.5° apart,
    /// off-nadir 42° (transmitter) and 52° (receiver).
    pub fn airborne_gc() -> ScenarioConfig {
        let psi = 2.498f64.to_radians();
        let rx = Trajectory::new(Vec3::new(0.0, 3068.0, 2397.0), Vec3::new(98.0, 0.0, 0.0));
        let tx = Trajectory::new(Vec3::new(0.0, 3080.0, 3421.0), Vec3::new(98.0 * psi.cos(), 98.0 * psi.sin(), 0.0));
        ScenarioConfig {
            name: "airborne-gc".into(),
            description: "Airborne general case, single point target at the scene origin".into(),
            radar: RadarParams::with_oversampling(10.17e9, 20e6, 3e-6, 1250.0, 1.2),
            transmitter: tx,
            receiver: rx,
            side: LookSide::Right,
            aperture: aperture(4.0, 0.0),
            focus: FocusConfig { mode: Mode::Gc, blocks: None, stage1_only: false },
            output: OutputConfig::default(),
            desk: desk(aperture(3.0, 0.0), None),
            targets: vec![TargetSpec::at_position(Vec3::new(0.0, 0.0, 0.0), 1.0)],
        }
    }

    /// Spaceborne tandem: same track and speed, transmitter 1 km behind,
    /// two targets 10 km apart in range with different amplitudes.
    pub fn tandem() -> ScenarioConfig {
        let rx = spaceborne_receiver(7000.0);
        let tx = Trajectory::new(rx.ref_position - Vec3::new(1000.0, 0.0, 0.0), rx.velocity);
        let r0 = rx.ref_position.norm();
        let targets = vec![
            TargetSpec::at_receiver(r0 - 5000.0, 0.0, 1.0),
            TargetSpec::at_receiver(r0 + 5000.0, 0.0, 0.5),
        ];
        ScenarioConfig {
            name: "tandem".into(),
            description: "Spaceborne tandem, two point targets 10 km apart in range".into(),
            radar: spaceborne_radar(40e6, 2500.0),
            transmitter: tx,
            receiver: rx,
            side: LookSide::Right,
            aperture: aperture(0.4, 0.1),
            focus: FocusConfig { mode: Mode::Tandem, blocks: None, stage1_only: false },
            output: OutputConfig::default(),
            desk: desk(aperture(0.3, 0.1), None),
            targets,
        }
    }

    /// Translationally invariant: parallel tracks, equal velocities, the
    /// transmitter 30 km closer in ground range and 500 m ahead; five
    /// targets 1 km apart in range with linearly increasing amplitude.
    pub fn translationally_invariant() -> ScenarioConfig {
        let rx = spaceborne_receiver(7000.0);
        let tx = Trajectory::new(rx.ref_position + Vec3::new(500.0, -30e3, 0.0), rx.velocity);
        let r0 = rx.ref_position.norm();
        let targets = (0..5).map(|i| TargetSpec::at_receiver(r0 + 1000.0 * (i as f64 - 2.0), 0.0, 0.2 * (i + 1) as f64)).collect();
        ScenarioConfig {
            name: "ti".into(),
            description: "Spaceborne translationally invariant case, five targets 1 km apart in range".into(),
            radar: spaceborne_radar(40e6, 2500.0),
            transmitter: tx,
            receiver: rx,
            side: LookSide::Right,
            aperture: aperture(0.3, 0.1),
            focus: FocusConfig { mode: Mode::Ti, blocks: Some([4, 1]), stage1_only: false },
            output: OutputConfig::default(),
            desk: desk(aperture(0.2, 0.1), None),
            targets,
        }
    }

    /// Receiver velocity of the spaceborne general case, m/s.
    pub const GC_RX_SPEED: f64 = 7100.0;

    /// Spaceborne general case: 7000 and 7100 m/s on tracks 14.3° apart,
    /// 4874 m baseline at the scene center; 3×5 targets, 1 km spacing.
    pub fn spaceborne_gc() -> ScenarioConfig {
        let rx = spaceborne_receiver(GC_RX_SPEED);
        // solved so that the baseline is 4874 m and normal to the relative
        // velocity at τ = 0, and the transmitter's closest approach to the
        // origin is also at τ = 0
        let tx = Trajectory::new(
            Vec3::new(-3764.698590234, 151448.381523181, 152735.893179202),
            Vec3::new(6766.83, 1352.849205195, -1174.653471924),
        );
        let r0 = rx.ref_position.norm();
        let ds = 1000.0 / GC_RX_SPEED;
        let mut targets = Vec::new();
        for a in 0..5 {
            for r in 0..3 {
                let mut t = TargetSpec::at_receiver(r0 + 1000.0 * (r as f64 - 1.0), ds * (a as f64 - 2.0), 1.0);
                t.name = Some(format!("PT{}{}", r + 1, a + 1));
                targets.push(t);
            }
        }
        ScenarioConfig {
            name: "spaceborne-gc".into(),
            description: "Spaceborne general case, 3 x 5 point targets with 1 km spacing".into(),
            radar: spaceborne_radar(20e6, 1800.0),
            transmitter: tx,
            receiver: rx,
            side: LookSide::Right,
            aperture: aperture(0.2, 0.0),
            focus: FocusConfig { mode: Mode::Gc, blocks: None, stage1_only: false },
            output: OutputConfig::default(),
            desk: desk(aperture(0.15, 0.0), None),
            targets,
        }
    }

    pub fn all() -> Vec<ScenarioConfig> {
        vec![airborne_gc(), tandem(), translationally_invariant(), spaceborne_gc()]
    }
}
