use thiserror::Error;

/// Errors raised across the simulator and processors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("trajectory velocity is zero")]
    ZeroVelocity,
    #[error("slant range at closest approach is zero ({platform})")]
    DegenerateRange { platform: &'static str },
    #[error("transmitter and receiver visibility intervals do not overlap")]
    EmptyOverlap,
    #[error("no stationary point: f = {f} Hz, f_tau = {f_tau} Hz is outside the spectral support")]
    NoStationaryPoint { f: f64, f_tau: f64 },
    #[error("echo of target {target} at pulse {pulse} falls outside the receive window")]
    WindowOverrun { target: usize, pulse: usize },
    #[error("scale must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("tandem assumption violated: {0}")]
    TandemAssumptionViolated(String),
    #[error("translationally invariant assumption violated: {0}")]
    TIAssumptionViolated(String),
    #[error("block {index} has {bins} bins, at least {min} required")]
    BlockTooNarrow { index: usize, bins: usize, min: usize },
    #[error("block regression is ill-conditioned (condition number {condition:.3e})")]
    RegressionIllConditioned { condition: f64 },
    #[error("no peak found near ({range_cell}, {azimuth_cell})")]
    NoPeakFound { range_cell: usize, azimuth_cell: usize },
    #[error("no ground point at R0R = {r0r} m, tau0R = {tau0r} s")]
    NoGroundPoint { r0r: f64, tau0r: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
