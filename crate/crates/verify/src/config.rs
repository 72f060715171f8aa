use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use normlab::Exponent;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest dyadic level a run may request (`2^14` cells).
pub const MAX_LEVEL: u32 = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Core,
    Duality,
    Operators,
    Interpolation,
    Dyadic,
    Seqspace,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Core,
        Suite::Duality,
        Suite::Operators,
        Suite::Interpolation,
        Suite::Dyadic,
        Suite::Seqspace,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Duality => "duality",
            Suite::Operators => "operators",
            Suite::Interpolation => "interpolation",
            Suite::Dyadic => "dyadic",
            Suite::Seqspace => "seqspace",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s.trim())
            .ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Expands a comma-separated suite list; `all` selects every suite.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        return Err(Error::Config("no suites selected".into()));
    }
    Ok(out)
}

pub fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Config(format!("bad {what} `{p}`")))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub levels: Vec<u32>,
    pub p_grid: Vec<Exponent>,
    /// Replacement constants and tolerances, keyed like `const.square_weak_type`.
    pub overrides: BTreeMap<String, f64>,
    /// Check id prefixes to keep; empty keeps everything.
    pub only: Vec<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suites: Suite::ALL.to_vec(),
            seed: 42,
            trials: 1000,
            dims: vec![4, 8, 16],
            levels: vec![4, 8, 12],
            p_grid: ["1", "1.5", "2", "3", "inf"]
                .iter()
                .map(|p| p.parse().expect("valid exponent"))
                .collect(),
            overrides: BTreeMap::new(),
            only: Vec::new(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.suites.is_empty() {
            return bad("no suites selected".into());
        }
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.dims.is_empty() || self.dims.contains(&0) {
            return bad(format!("dims must be positive, got {:?}", self.dims));
        }
        if self.levels.is_empty() {
            return bad("levels must be nonempty".into());
        }
        if let Some(l) = self.levels.iter().find(|&&l| l > MAX_LEVEL) {
            return bad(format!("level {l} exceeds {MAX_LEVEL}"));
        }
        if self.p_grid.is_empty() {
            return bad("p grid must be nonempty".into());
        }
        if let Some((k, v)) = self.overrides.iter().find(|(_, v)| v.is_nan()) {
            return bad(format!("override {k} = {v}"));
        }
        Ok(())
    }

    pub fn includes(&self, suite: Suite, id: &str) -> bool {
        self.suites.contains(&suite)
            && (self.only.is_empty() || self.only.iter().any(|p| id.starts_with(p.as_str())))
    }

    pub fn echo(&self) -> ConfigEcho {
        ConfigEcho {
            suites: self.suites.iter().map(|s| s.to_string()).collect(),
            seed: self.seed,
            trials: self.trials,
            dims: self.dims.clone(),
            levels: self.levels.clone(),
            p_grid: self.p_grid.iter().map(|p| p.to_string()).collect(),
            overrides: self.overrides.clone(),
            only: self.only.clone(),
        }
    }
}

/// The serialized form of a [`SuiteConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub suites: Vec<String>,
    pub seed: u64,
    pub trials: usize,
    pub dims: Vec<usize>,
    pub levels: Vec<u32>,
    pub p_grid: Vec<String>,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub only: Vec<String>,
}

impl TryFrom<ConfigEcho> for SuiteConfig {
    type Error = Error;

    fn try_from(e: ConfigEcho) -> Result<Self> {
        let suites = parse_suites(&e.suites.join(","))?;
        let p_grid = e
            .p_grid
            .iter()
            .map(|p| {
                p.parse()
                    .map_err(|_| Error::Config(format!("bad exponent `{p}`")))
            })
            .collect::<Result<_>>()?;
        let config = SuiteConfig {
            suites,
            seed: e.seed,
            trials: e.trials,
            dims: e.dims,
            levels: e.levels,
            p_grid,
            overrides: e.overrides,
            only: e.only,
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_expand_and_dedup() {
        assert_eq!(parse_suites("all").unwrap(), Suite::ALL.to_vec());
        assert_eq!(
            parse_suites("dyadic,core,dyadic").unwrap(),
            vec![Suite::Core, Suite::Dyadic]
        );
        assert!(parse_suites("nope").is_err());
        assert!(parse_suites("").is_err());
    }

    #[test]
    fn validation() {
        assert!(SuiteConfig::default().validate().is_ok());
        let c = SuiteConfig {
            trials: 0,
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SuiteConfig {
            levels: vec![15],
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
        let c = SuiteConfig {
            dims: vec![0],
            ..SuiteConfig::default()
        };
        assert!(c.validate().is_err());
    }

    #[test]
    fn echo_round_trip() {
        let mut c = SuiteConfig::default();
        c.overrides.insert("const.x".into(), 2.5);
        let back = SuiteConfig::try_from(c.echo()).unwrap();
        assert_eq!(back, c);
    }
}
