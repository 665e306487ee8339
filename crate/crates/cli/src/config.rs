use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use stillwave::wavesolver::{ContinuationSettings, NewtonParams};
use stillwave::FamilySpec;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub vorticity: FamilySpec,
    #[serde(default)]
    pub flow: FlowSpec,
    /// Highest k of the h_k^{(±)} enumeration.
    #[serde(default = "default_k_max")]
    pub k_max: usize,
    #[serde(default = "one", rename = "slope_bound_B")]
    pub slope_bound_b: f64,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub newton: NewtonParams,
    #[serde(default)]
    pub stream: StreamSection,
    #[serde(default)]
    pub solve: SolveSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub dispersion: DispersionSection,
    #[serde(default)]
    pub diagnose: DiagnoseSection,
}

/// Which flat state to use. With `s` the flow is U(y; s), cut at `h` or at
/// the first height where U = 1; otherwise the `index`-th still family
/// member in depth order.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub index: Option<usize>,
    pub s: Option<f64>,
    pub h: Option<f64>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { nx: 64, ny: 32 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StreamSection {
    pub samples: usize,
    /// Defaults to the depth of the selected flow.
    pub y_max: Option<f64>,
}

impl Default for StreamSection {
    fn default() -> Self {
        Self { samples: 101, y_max: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    /// Newton from a·cos(2πx/L) on the surface at the head of the flow.
    Perturb,
    /// Height-pinned continuation from the first dispersion root.
    Branch,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSection {
    pub mode: SolveMode,
    pub amplitude: f64,
    pub wavelength: f64,
    pub heights: Vec<f64>,
    pub k_min: f64,
    pub k_max: f64,
}

impl Default for SolveSection {
    fn default() -> Self {
        Self {
            mode: SolveMode::Perturb,
            amplitude: 0.02,
            wavelength: 4.0,
            heights: ContinuationSettings::default().heights,
            k_min: 0.0,
            k_max: 5.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub amplitudes: Vec<f64>,
    pub wavelengths: Vec<f64>,
    #[serde(rename = "B_cap")]
    pub b_cap: f64,
    pub epsilon_proxy: f64,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self {
            amplitudes: vec![0.005, 0.02, 0.05],
            wavelengths: vec![2.0, 4.0, 8.0],
            b_cap: 1.0,
            epsilon_proxy: 0.1,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DispersionSection {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
}

impl Default for DispersionSection {
    fn default() -> Self {
        Self { k_min: 0.0, k_max: 5.0, samples: 51 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnoseSection {
    pub t: f64,
    pub delta: Option<f64>,
    /// Manufactured surface used when no --state is given.
    pub amplitude: f64,
    pub wavelength: f64,
    /// Linearised quartic-scaling probe; skipped when empty.
    pub probe_amplitudes: Vec<f64>,
}

impl Default for DiagnoseSection {
    fn default() -> Self {
        Self {
            t: 0.0,
            delta: None,
            amplitude: 0.01,
            wavelength: 4.0,
            probe_amplitudes: Vec::new(),
        }
    }
}

fn default_k_max() -> usize {
    3
}

fn one() -> f64 {
    1.0
}

pub struct LoadedConfig {
    pub config: Config,
    /// sha256 of the config re-serialised with sorted keys.
    pub digest: String,
}

pub fn load(path: &Path) -> Result<LoadedConfig> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
    if !value.is_object() {
        bail!("config {} must be a JSON object", path.display());
    }
    let digest = canonical_digest(&value);
    let config: Config =
        serde_json::from_value(value).with_context(|| format!("invalid config {}", path.display()))?;
    Ok(LoadedConfig { config, digest })
}

/// serde_json maps are ordered by key, so `to_string` is canonical.
pub fn canonical_digest(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(value).expect("JSON values serialise");
    format!("{:x}", Sha256::digest(canonical.as_bytes()))
}
