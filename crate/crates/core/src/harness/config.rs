use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{Area, AssociationMode};
use crate::optics::{FiberParams, RadioParams, Scheme};
use crate::power::{CrossoverSearch, PowerParams};
use crate::wireless::{ChannelModel, ThroughputModel};

/// What the throughput sweep does with an (M, scheme) point whose fixed
/// consumption already exceeds the budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InfeasiblePolicy {
    /// Abort the sweep with an infeasible-budget error.
    #[default]
    Error,
    /// Keep going and report the point as zero throughput with `p_tx_w = NaN`.
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub area: Area,
    /// J = round(ue_per_rap * M), at least 1.
    pub ue_per_rap: f64,
    pub association: AssociationMode,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            area: Area::default(),
            ue_per_rap: 0.5,
            association: AssociationMode::UeNearest,
        }
    }
}

impl ScenarioConfig {
    pub fn num_ues(&self, num_raps: usize) -> usize {
        ((self.ue_per_rap * num_raps as f64).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub fiber_km: Vec<f64>,
    pub num_raps: Vec<usize>,
    /// RF carriers for the dispersion and power sweeps.
    pub frequencies_hz: Vec<f64>,
}

impl Default for SweepAxes {
    fn default() -> Self {
        Self {
            fiber_km: (0..=100).map(|i| i as f64 * 0.25).collect(),
            num_raps: vec![16, 32, 64, 128, 256],
            frequencies_hz: vec![10e9, 20e9, 30e9],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PowerSweepConfig {
    pub num_raps: usize,
    pub p_tx_w: f64,
    pub crossover: CrossoverSearch,
}

impl Default for PowerSweepConfig {
    fn default() -> Self {
        Self {
            num_raps: 100,
            p_tx_w: 1.0,
            crossover: CrossoverSearch::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BeamConfig {
    pub elements: usize,
    /// Element spacing, m. `None` means half a wavelength at the top of the band.
    pub spacing_m: Option<f64>,
    pub center_freq_hz: f64,
    pub band_hz: (f64, f64),
    pub steer_deg: f64,
    pub frequencies_hz: Vec<f64>,
    pub theta_from_deg: f64,
    pub theta_to_deg: f64,
    pub theta_step_deg: f64,
}

impl Default for BeamConfig {
    fn default() -> Self {
        Self {
            elements: 16,
            spacing_m: None,
            center_freq_hz: 10e9,
            band_hz: (10e9, 20e9),
            steer_deg: 30.0,
            frequencies_hz: vec![10e9, 12.5e9, 15e9, 17.5e9, 20e9],
            theta_from_deg: -90.0,
            theta_to_deg: 90.0,
            theta_step_deg: 0.1,
        }
    }
}

impl BeamConfig {
    pub fn spacing(&self) -> f64 {
        self.spacing_m
            .unwrap_or(crate::units::SPEED_OF_LIGHT / (2.0 * self.band_hz.1))
    }
}

/// Fully resolved experiment description. Every field has a default, so an
/// empty JSON object is a valid config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenario: ScenarioConfig,
    pub fiber: FiberParams,
    pub radio: RadioParams,
    pub schemes: Vec<Scheme>,
    pub power: PowerParams,
    pub channel: ChannelModel,
    pub throughput: ThroughputModel,
    pub budget_w: f64,
    pub sweep: SweepAxes,
    pub power_sweep: PowerSweepConfig,
    pub beam: BeamConfig,
    pub monte_carlo_drops: usize,
    pub base_seed: u64,
    /// Worker threads for Monte Carlo drops; 0 uses all cores.
    pub threads: usize,
    pub on_infeasible: InfeasiblePolicy,
    /// Report dispersion nulls as infinite values instead of failing.
    pub allow_null: bool,
    pub output_path: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: ScenarioConfig::default(),
            fiber: FiberParams::default(),
            radio: RadioParams::default(),
            schemes: Scheme::ALL.to_vec(),
            power: PowerParams::default(),
            channel: ChannelModel::default(),
            throughput: ThroughputModel::default(),
            budget_w: 2100.0,
            sweep: SweepAxes::default(),
            power_sweep: PowerSweepConfig::default(),
            beam: BeamConfig::default(),
            monte_carlo_drops: 100,
            base_seed: 1,
            threads: 0,
            on_infeasible: InfeasiblePolicy::Error,
            allow_null: false,
            output_path: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Checks everything shared by all sweeps. Sweep-specific axes are
    /// checked by the sweep that needs them.
    pub fn validate(&self) -> Result<()> {
        let wrap = |e: Error| Error::Config(e.to_string());
        self.fiber.validate().map_err(wrap)?;
        self.radio.validate().map_err(wrap)?;
        self.power.validate().map_err(wrap)?;
        self.channel.validate().map_err(wrap)?;
        if self.schemes.is_empty() {
            return Err(Error::Config("scheme list is empty".into()));
        }
        if self.monte_carlo_drops == 0 {
            return Err(Error::Config("monte_carlo_drops must be at least 1".into()));
        }
        if !(self.scenario.ue_per_rap > 0.0) {
            return Err(Error::Config("ue_per_rap must be positive".into()));
        }
        if !(self.budget_w > 0.0) {
            return Err(Error::Config("budget_w must be positive".into()));
        }
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(json.as_bytes())
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }
}
