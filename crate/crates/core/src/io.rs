//! Sample files: little-endian complex float32, row-major `[azimuth][range]`,
//! with a TOML header in a sidecar next to the data file.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::focuser::{FocusDiagnostics, FocusedImage, OutputGrid};
use crate::rawsim::RawDataGrid;
use crate::scenario::ScenarioConfig;

pub const RAW_FORMAT: &str = "bisar-raw-1";
pub const IMAGE_FORMAT: &str = "bisar-image-1";

/// Sidecar header path of a data file: `<data>.hdr.toml`.
pub fn header_path(data: &Path) -> PathBuf {
    let mut s = data.as_os_str().to_owned();
    s.push(".hdr.toml");
    PathBuf::from(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHeader {
    pub format: String,
    pub n_azimuth: usize,
    pub n_range: usize,
    pub t0: f64,
    pub tau_start: f64,
    pub fs: f64,
    pub prf: f64,
    /// The scenario that produced the data, desk overrides already applied.
    pub scenario: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImageHeader {
    pub format: String,
    pub n_azimuth: usize,
    pub n_range: usize,
    pub processor: String,
    pub az_speed: f64,
    pub grid: OutputGrid,
    pub scenario: ScenarioConfig,
    pub diagnostics: FocusDiagnostics,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io(format!("{}: {e}", path.display()))
}

fn write_samples(path: &Path, samples: &Array2<Complex64>) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(file);
    for z in samples.iter() {
        w.write_all(&(z.re as f32).to_le_bytes()).map_err(|e| io_err(path, e))?;
        w.write_all(&(z.im as f32).to_le_bytes()).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

fn read_samples(path: &Path, n_azimuth: usize, n_range: usize) -> Result<Array2<Complex64>> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    let expected = n_azimuth * n_range * 8;
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "{}: {} bytes, header declares {n_azimuth} x {n_range} samples ({expected} bytes)",
            path.display(),
            bytes.len()
        )));
    }
    let values: Vec<Complex64> = bytes
        .chunks_exact(8)
        .map(|c| {
            let re = f32::from_le_bytes([c[0], c[1], c[2], c[3]]);
            let im = f32::from_le_bytes([c[4], c[5], c[6], c[7]]);
            Complex64::new(re as f64, im as f64)
        })
        .collect();
    Array2::from_shape_vec((n_azimuth, n_range), values).map_err(|e| Error::Format(e.to_string()))
}

fn write_header<T: Serialize>(data: &Path, header: &T) -> Result<()> {
    let text = toml::to_string(header).map_err(|e| Error::Format(e.to_string()))?;
    let path = header_path(data);
    fs::write(&path, text).map_err(|e| io_err(&path, e))
}

fn read_header<T: DeserializeOwned>(data: &Path) -> Result<T> {
    let path = header_path(data);
    let text = fs::read_to_string(&path).map_err(|e| io_err(&path, e))?;
    toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

fn check_format(found: &str, expected: &str, data: &Path) -> Result<()> {
    if found != expected {
        return Err(Error::Format(format!("{}: format {found:?}, expected {expected:?}", data.display())));
    }
    Ok(())
}

pub fn write_raw(path: &Path, raw: &RawDataGrid, scenario: &ScenarioConfig) -> Result<()> {
    let header = RawHeader {
        format: RAW_FORMAT.into(),
        n_azimuth: raw.n_azimuth(),
        n_range: raw.n_range(),
        t0: raw.t0,
        tau_start: raw.tau_start,
        fs: raw.fs,
        prf: raw.prf,
        scenario: scenario.clone(),
    };
    write_samples(path, &raw.samples)?;
    write_header(path, &header)
}

pub fn read_raw(path: &Path) -> Result<(RawDataGrid, RawHeader)> {
    let h: RawHeader = read_header(path)?;
    check_format(&h.format, RAW_FORMAT, path)?;
    let samples = read_samples(path, h.n_azimuth, h.n_range)?;
    Ok((RawDataGrid { samples, t0: h.t0, tau_start: h.tau_start, fs: h.fs, prf: h.prf }, h))
}

pub fn write_image(path: &Path, img: &FocusedImage, scenario: &ScenarioConfig) -> Result<()> {
    let header = ImageHeader {
        format: IMAGE_FORMAT.into(),
        n_azimuth: img.samples.nrows(),
        n_range: img.samples.ncols(),
        processor: img.processor.clone(),
        az_speed: img.az_speed,
        grid: img.grid,
        scenario: scenario.clone(),
        diagnostics: img.diagnostics.clone(),
    };
    write_samples(path, &img.samples)?;
    write_header(path, &header)
}

pub fn read_image(path: &Path) -> Result<(FocusedImage, ImageHeader)> {
    let h: ImageHeader = read_header(path)?;
    check_format(&h.format, IMAGE_FORMAT, path)?;
    if h.grid.n_azimuth != h.n_azimuth || h.grid.n_range != h.n_range {
        return Err(Error::Format(format!("{}: grid and sample dimensions disagree", path.display())));
    }
    let samples = read_samples(path, h.n_azimuth, h.n_range)?;
    let img = FocusedImage {
        samples,
        grid: h.grid,
        az_speed: h.az_speed,
        processor: h.processor.clone(),
        diagnostics: h.diagnostics.clone(),
    };
    Ok((img, h))
}

/// Writes any serializable value as TOML.
pub fn write_toml<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = toml::to_string(value).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(path, text).map_err(|e| io_err(path, e))
}

pub fn read_toml<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    toml::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}
