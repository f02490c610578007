//! Line-oriented `key=value` profile descriptions.
//!
//! ```text
//! # comments and blank lines are ignored
//! family=slowly_varying
//! mu_choice=power
//! alpha=0.5
//! ```
//!
//! Tabulated profiles name their CSV with `table=path`; relative paths are
//! resolved against the config file's directory. The run settings `r_min`,
//! `r_max`, `ratio`, `samples`, `cells` and `method` are carried along for
//! the command-line tool and ignored by [`ProfileConfig::to_profile`].

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use super::{Profile, SlowlyVarying};
use crate::error::{Error, Result};

const KEYS: [&str; 12] = [
    "family",
    "alpha",
    "beta",
    "gamma",
    "mu_choice",
    "table",
    "r_min",
    "r_max",
    "ratio",
    "samples",
    "cells",
    "method",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ProfileConfig {
    values: BTreeMap<String, String>,
    base: Option<PathBuf>,
}

/// Parses `key=value` lines.
pub fn parse_profile_config(text: &str) -> Result<ProfileConfig> {
    let mut cfg = ProfileConfig::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            Error::InvalidInput(format!("config line {}: expected key=value", i + 1))
        })?;
        cfg.set(k.trim(), v.trim())?;
    }
    Ok(cfg)
}

impl ProfileConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = parse_profile_config(&text)?;
        cfg.base = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    /// Sets a key, replacing an earlier value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::InvalidInput(format!("unknown config key `{key}`")));
        }
        self.values.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `(key, value)` pairs in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    fn number(&self, key: &str) -> Result<f64> {
        let raw = self
            .get(key)
            .ok_or_else(|| Error::InvalidInput(format!("missing `{key}`")))?;
        raw.parse()
            .map_err(|_| Error::InvalidInput(format!("`{key}` is not a number: {raw}")))
    }

    pub fn to_profile(&self) -> Result<Profile> {
        let family = self
            .get("family")
            .ok_or_else(|| Error::InvalidInput("missing `family`".into()))?;
        match family {
            "power_law" => Profile::power_law(self.number("alpha")?),
            "exp_decay" => Profile::exponential_decay(self.number("alpha")?),
            "dprs" => Ok(Profile::dprs()),
            "staircase" => Ok(Profile::staircase()),
            "slowly_varying" => {
                let choice = match self.get("mu_choice") {
                    Some("log_power") => SlowlyVarying::LogPower {
                        beta: self.number("beta")?,
                    },
                    Some("power") => SlowlyVarying::Power {
                        alpha: self.number("alpha")?,
                    },
                    Some("loglog") => SlowlyVarying::LogLog {
                        gamma: self.number("gamma")?,
                    },
                    other => {
                        return Err(Error::InvalidInput(format!(
                            "mu_choice must be log_power, power or loglog, got {other:?}"
                        )))
                    }
                };
                Profile::slowly_varying(choice)
            }
            "tabulated" => {
                let table = self
                    .get("table")
                    .ok_or_else(|| Error::InvalidInput("tabulated profile needs `table`".into()))?;
                let mut path = PathBuf::from(table);
                if path.is_relative() {
                    if let Some(base) = &self.base {
                        path = base.join(path);
                    }
                }
                Profile::tabulated_csv(&path)
            }
            other => Err(Error::InvalidInput(format!("unknown family `{other}`"))),
        }
    }
}
