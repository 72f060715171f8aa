use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::case::Case;
use crate::config::ConfigEcho;
use crate::error::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// Inputs of one trial, with enough context to re-run it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub check: String,
    pub seed: u64,
    pub trial: usize,
    pub config: ConfigEcho,
    pub case: Case,
}

impl Witness {
    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Witness(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: String,
    pub anchor: String,
    pub trials: usize,
    /// Smallest margin over the trials; nonnegative means the property held.
    pub worst_margin: f64,
    pub passed: bool,
    /// Largest ratio, for golden checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// The worst trial.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub checks: usize,
    pub failed: usize,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format_version: u32,
    pub passed: bool,
    pub wall_time_seconds: f64,
    pub config: ConfigEcho,
    pub summary: Summary,
    /// Sorted by id.
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn new(config: ConfigEcho, mut checks: Vec<CheckRecord>, wall_time_seconds: f64) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let failed = checks.iter().filter(|c| !c.passed).count();
        Self {
            format_version: FORMAT_VERSION,
            passed: failed == 0,
            wall_time_seconds,
            config,
            summary: Summary {
                checks: checks.len(),
                failed,
                trials: checks.iter().map(|c| c.trials).sum(),
            },
            checks,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn get(&self, id: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
