//! Impulse-response report of the declared targets in a focused image.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::focuser::FocusedImage;
use crate::irf::{extract_irf, IrfMetrics};
use crate::scenario::ScenarioConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    pub name: String,
    /// True receiver closest-approach range, m.
    pub r0r: f64,
    /// True receiver closest-approach time, s.
    pub tau0r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metrics: Option<IrfMetrics>,
    /// Why no metrics could be extracted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Peak offset of a target from the first declared target, m.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Offset {
    pub from: String,
    pub to: String,
    pub range: f64,
    pub azimuth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FocusReport {
    pub scenario: String,
    pub processor: String,
    pub range_cell: f64,
    pub azimuth_cell: f64,
    pub targets: Vec<TargetReport>,
    pub offsets: Vec<Offset>,
}

impl FocusReport {
    pub fn peak_cells(&self) -> Vec<(f64, f64)> {
        self.targets.iter().filter_map(|t| t.metrics.map(|m| m.peak_cell)).collect()
    }
}

fn target_name(cfg: &ScenarioConfig, i: usize) -> String {
    cfg.targets.get(i).and_then(|t| t.name.clone()).unwrap_or_else(|| format!("PT{}", i + 1))
}

/// Measures every declared target near its true position.
pub fn analyze(img: &FocusedImage, cfg: &ScenarioConfig) -> Result<FocusReport> {
    let truths = cfg.truths()?;
    let targets: Vec<TargetReport> = truths
        .iter()
        .enumerate()
        .map(|(i, &(r0r, tau0r))| {
            let (metrics, error) = match extract_irf(img, img.grid.cell_of(r0r, tau0r), Some((r0r, tau0r))) {
                Ok(m) => (Some(m), None),
                Err(e) => (None, Some(e.to_string())),
            };
            TargetReport { name: target_name(cfg, i), r0r, tau0r, metrics, error }
        })
        .collect();
    let mut offsets = Vec::new();
    if let Some(first) = targets.first().and_then(|t| t.metrics.map(|m| (t.name.clone(), m))) {
        for t in &targets[1..] {
            if let Some(m) = t.metrics {
                offsets.push(Offset {
                    from: first.0.clone(),
                    to: t.name.clone(),
                    range: m.peak_range - first.1.peak_range,
                    azimuth: m.peak_az - first.1.peak_az,
                });
            }
        }
    }
    Ok(FocusReport {
        scenario: cfg.name.clone(),
        processor: img.processor.clone(),
        range_cell: img.range_cell(),
        azimuth_cell: img.az_cell_meters(),
        targets,
        offsets,
    })
}
