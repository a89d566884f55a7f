//! Bistatic SAR point-target simulation and focusing.
//!
//! The crate covers the whole chain: straight-line bistatic geometry,
//! time-domain raw data simulation, the analytic bistatic point-target
//! spectrum, a chirp-based inverse scaled FFT, three frequency-domain
//! focusing processors (tandem, translationally invariant, general case),
//! brute-force reference computations and impulse-response analysis.

pub mod error;
pub mod fft;
pub mod focuser;
pub mod geometry;
pub mod io;
pub mod irf;
pub mod lbf;
pub mod oracle;
pub mod plot;
pub mod rawsim;
pub mod report;
pub mod scenario;
pub mod sfft;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
