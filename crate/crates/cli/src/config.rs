//! `key=value` configuration files. Keys are flag names without the leading
//! dashes; `-` and `_` are interchangeable.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use clap::ValueEnum;

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "omega1_ghz",
    "omega2_ghz",
    "omega_ghz",
    "alpha_rad",
    "alpha",
    "th_k",
    "tc_k",
    "lambda",
    "units",
    "lambda_binding",
    "lambda_grid",
    "omega_grid",
    "alpha_list",
    "jobs",
    "seed",
    "draws",
    "stage",
    "samples",
    "out",
];

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
            let key = k.trim().trim_start_matches("--").replace('-', "_");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::Usage(format!(
                    "config line {}: unknown key '{}'",
                    n + 1,
                    k.trim()
                )));
            }
            let key = if key == "alpha" { "alpha_rad".to_string() } else { key };
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::Usage(format!("config line {}: duplicate key '{key}'", n + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the parsed config value.
    pub fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|s| {
                s.parse()
                    .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse '{s}'")))
            })
            .transpose()
    }

    pub fn pick_enum<T: ValueEnum>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.raw(key)
            .map(|s| T::from_str(s, true).map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
            .transpose()
    }
}
