use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::channel::{CodeSpec, SchemeSpec};
use crate::error::{Error, Result};
use crate::mc::{DEFAULT_GAMMA, DEFAULT_PACKETS};
use crate::models::ModelKind;

use super::optimize::DEFAULT_DECORRELATION_THRESHOLD;

/// An estimator a sweep can run: one of the analytical models or the
/// simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Selector {
    Analytic(ModelKind),
    Simulation,
}

impl Selector {
    pub const ALL: [Selector; 5] = [
        Selector::Analytic(ModelKind::Model1),
        Selector::Analytic(ModelKind::Model2),
        Selector::Analytic(ModelKind::Model3),
        Selector::Analytic(ModelKind::Baseline),
        Selector::Simulation,
    ];

    pub fn analytic(&self) -> Option<ModelKind> {
        match self {
            Selector::Analytic(k) => Some(*k),
            Selector::Simulation => None,
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Analytic(k) => f.write_str(k.as_str()),
            Selector::Simulation => f.write_str("mc"),
        }
    }
}

impl FromStr for Selector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "mc" {
            Ok(Selector::Simulation)
        } else {
            s.parse().map(Selector::Analytic)
        }
    }
}

impl TryFrom<String> for Selector {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Selector> for String {
    fn from(s: Selector) -> String {
        s.to_string()
    }
}

/// What the relative-error column is measured against.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Simulation when the sweep runs both analytic models and `mc`,
    /// otherwise none.
    #[default]
    Auto,
    None,
    /// `(p_model - p_hat) / p_hat` at the same point.
    Simulation,
    /// `(p - p_deepest) / p_deepest` against the same estimator at the
    /// largest interleaving depth of the grid.
    MaxDepth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelGrid {
    #[serde(rename = "p_E")]
    pub p_e: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(default = "default_slot")]
    pub slot: f64,
}

fn default_slot() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSettings {
    #[serde(default = "default_packets")]
    pub packets: u64,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_packets() -> u64 {
    DEFAULT_PACKETS
}

fn default_seed() -> u64 {
    1
}

fn default_gamma() -> f64 {
    DEFAULT_GAMMA
}

impl Default for SimulationSettings {
    fn default() -> Self {
        Self {
            packets: DEFAULT_PACKETS,
            seed: default_seed(),
            gamma: DEFAULT_GAMMA,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub echo: Option<PathBuf>,
}

/// One reproducible experiment: channel grid, codes, interleaving schemes,
/// estimators, simulation settings and output paths.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub channel: ChannelGrid,
    pub codes: Vec<CodeSpec>,
    /// Packet size in bits; every scheme must satisfy `I * M * n = budget`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    /// Explicit `(I, M)` pairs. When absent every pair fitting `budget` is used.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schemes: Option<Vec<SchemeSpec>>,
    pub models: Vec<Selector>,
    #[serde(default)]
    pub reference: Reference,
    #[serde(default)]
    pub simulation: SimulationSettings,
    #[serde(default = "default_threshold")]
    pub decorrelation_threshold: f64,
    #[serde(default)]
    pub output: OutputPaths,
}

fn default_threshold() -> f64 {
    DEFAULT_DECORRELATION_THRESHOLD
}

impl Default for ExperimentConfig {
    /// n = 63 codes with l = 1, 3, 5 over a 1008-bit packet.
    fn default() -> Self {
        Self {
            channel: ChannelGrid {
                p_e: vec![1e-3, 2e-3, 5e-3, 1e-2, 2e-2],
                c: vec![0.3, 0.6, 0.9],
                slot: default_slot(),
            },
            codes: vec![
                CodeSpec { n: 63, k: 57, l: 1 },
                CodeSpec { n: 63, k: 45, l: 3 },
                CodeSpec { n: 63, k: 36, l: 5 },
            ],
            budget: Some(1008),
            schemes: None,
            models: vec![
                Selector::Analytic(ModelKind::Model1),
                Selector::Analytic(ModelKind::Model2),
                Selector::Analytic(ModelKind::Model3),
                Selector::Analytic(ModelKind::Baseline),
            ],
            reference: Reference::Auto,
            simulation: SimulationSettings::default(),
            decorrelation_threshold: DEFAULT_DECORRELATION_THRESHOLD,
            output: OutputPaths::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }
}
