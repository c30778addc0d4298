//! Sweep configuration: an optional JSON file overlaid by command-line flags.

use std::path::Path;

use clap::ValueEnum;
use ndsread::ChannelPair;
use serde::{Deserialize, Serialize};

use crate::curves::Curve;
use crate::error::{CliError, Result};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// `R0 = 0`: is a reflector present?
    Detection,
    /// `0 < R0 < R1 < 1`: which of two lossy memory cells?
    Reading,
    /// `R1 = 1`: one cell is a perfect mirror.
    Ideal,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub scenario: Scenario,
    pub r0: f64,
    pub r1: f64,
    pub ns_grid: Vec<f64>,
    /// Pair count for the two-mode squeezed vacuum curves.
    pub modes: usize,
    pub outputs: Vec<Curve>,
    pub format: Format,
    pub seed: u64,
}

/// Every field optional; used both for the config file and for flags.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub scenario: Option<Scenario>,
    pub r0: Option<f64>,
    pub r1: Option<f64>,
    pub ns_grid: Option<Vec<f64>>,
    pub modes: Option<usize>,
    pub outputs: Option<Vec<Curve>>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl PartialConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    /// Fields set in `over` win.
    pub fn overlay(self, over: PartialConfig) -> PartialConfig {
        PartialConfig {
            scenario: over.scenario.or(self.scenario),
            r0: over.r0.or(self.r0),
            r1: over.r1.or(self.r1),
            ns_grid: over.ns_grid.or(self.ns_grid),
            modes: over.modes.or(self.modes),
            outputs: over.outputs.or(self.outputs),
            format: over.format.or(self.format),
            seed: over.seed.or(self.seed),
        }
    }
}

/// `steps` evenly spaced points from `min` to `max` inclusive.
pub fn linear_grid(min: f64, max: f64, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 || !(min.is_finite() && max.is_finite()) {
        return Err(CliError::Usage(
            "grid needs at least one finite point".into(),
        ));
    }
    if steps == 1 {
        return Ok(vec![min]);
    }
    let h = (max - min) / (steps - 1) as f64;
    Ok((0..steps)
        .map(|i| {
            if i + 1 == steps {
                max
            } else {
                min + h * i as f64
            }
        })
        .collect())
}

impl SweepConfig {
    pub fn from_partial(p: PartialConfig) -> Result<Self> {
        let r0 = p.r0.ok_or_else(|| CliError::Usage("missing --r0".into()))?;
        let r1 = p.r1.ok_or_else(|| CliError::Usage("missing --r1".into()))?;
        let scenario = p.scenario.unwrap_or(if r0 == 0.0 {
            Scenario::Detection
        } else if r1 == 1.0 {
            Scenario::Ideal
        } else {
            Scenario::Reading
        });
        let cfg = SweepConfig {
            scenario,
            r0,
            r1,
            ns_grid: match p.ns_grid {
                Some(g) => g,
                None => linear_grid(1.0, 100.0, 100)?,
            },
            modes: p.modes.unwrap_or(50),
            outputs: p.outputs.unwrap_or_else(|| Curve::ALL.to_vec()),
            format: p.format.unwrap_or(Format::Csv),
            seed: p.seed.unwrap_or(0),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn channel(&self) -> Result<ChannelPair> {
        ChannelPair::reading(self.r0, self.r1).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.channel()?;
        if self.ns_grid.is_empty() {
            return Err(CliError::Usage("energy grid is empty".into()));
        }
        if self.ns_grid.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(CliError::Usage(
                "energies must be finite and nonnegative".into(),
            ));
        }
        if self.ns_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Usage(
                "energy grid must be strictly increasing".into(),
            ));
        }
        if self.modes == 0 {
            return Err(CliError::Usage("--modes must be at least 1".into()));
        }
        if self.outputs.is_empty() {
            return Err(CliError::Usage("no output curves selected".into()));
        }
        let consistent = match self.scenario {
            Scenario::Detection => self.r0 == 0.0 && self.r1 < 1.0 && self.r1 > 0.0,
            Scenario::Ideal => self.r1 == 1.0 && self.r0 > 0.0,
            Scenario::Reading => self.r0 > 0.0 && self.r1 < 1.0 && self.r0 < self.r1,
        };
        if !consistent {
            return Err(CliError::Usage(format!(
                "scenario {:?} is inconsistent with R0 = {}, R1 = {}",
                self.scenario, self.r0, self.r1
            )));
        }
        Ok(())
    }
}
