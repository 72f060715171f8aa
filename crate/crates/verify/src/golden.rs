//! Recorded maxima of the empirical ratio checks.
//!
//! A value applies only to the profile it was recorded under (seed, trial
//! count and levels); other runs just require a finite maximum.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::SuiteConfig;
use crate::error::Result;

pub const DEFAULT_TOLERANCE: f64 = 0.05;

const BUILTIN: &str = include_str!("../fixtures/golden.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    pub seed: u64,
    pub trials: usize,
    pub levels: Vec<u32>,
    #[serde(default)]
    pub values: BTreeMap<String, f64>,
}

impl Profile {
    pub fn matches(&self, config: &SuiteConfig) -> bool {
        self.seed == config.seed && self.trials == config.trials && self.levels == config.levels
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Golden {
    pub tolerance: f64,
    #[serde(default, rename = "profile")]
    pub profiles: Vec<Profile>,
}

impl Default for Golden {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            profiles: Vec::new(),
        }
    }
}

impl Golden {
    /// The fixture shipped with the crate.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN).expect("bundled golden fixture parses")
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// The expected maximum of check `id` under `config`. An override
    /// `golden.<id>` takes precedence.
    pub fn expected(&self, config: &SuiteConfig, id: &str) -> Option<f64> {
        if let Some(v) = config.overrides.get(&format!("golden.{id}")) {
            return Some(*v);
        }
        self.profiles
            .iter()
            .find(|p| p.matches(config))
            .and_then(|p| p.values.get(id).copied())
    }

    /// Margin of `observed` against the expected value: `tol − |observed/g − 1|`,
    /// or `+∞` when nothing is recorded and `observed` is finite.
    pub fn margin(&self, config: &SuiteConfig, id: &str, observed: f64) -> f64 {
        if !observed.is_finite() {
            return f64::NEG_INFINITY;
        }
        let tol = config
            .overrides
            .get("tol.golden")
            .copied()
            .unwrap_or(self.tolerance);
        match self.expected(config, id) {
            Some(g) if g != 0.0 => tol - (observed / g - 1.0).abs(),
            Some(_) => tol - observed.abs(),
            None => f64::INFINITY,
        }
    }

    /// Stores `values` under `config`'s profile, replacing what was there.
    pub fn record(&mut self, config: &SuiteConfig, values: BTreeMap<String, f64>) {
        match self.profiles.iter_mut().find(|p| p.matches(config)) {
            Some(p) => p.values.extend(values),
            None => self.profiles.push(Profile {
                seed: config.seed,
                trials: config.trials,
                levels: config.levels.clone(),
                values,
            }),
        }
    }
}
