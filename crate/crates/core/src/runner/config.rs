//! Flat `key = value` scenario files.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::measurement::BellChoice;
use crate::params::{derived_frequencies, ModelParams, PARAM_FIELDS};

pub const SCENARIO_KEYS: [&str; 7] = ["t_max", "n_steps", "outcome_i", "outcome_j", "bell", "sweep_field", "sweep_values"];

/// Every accepted key, model parameters first.
pub fn all_keys() -> impl Iterator<Item = &'static str> {
    PARAM_FIELDS.iter().chain(SCENARIO_KEYS.iter()).copied()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellSelection {
    Both,
    Only(BellChoice),
}

impl BellSelection {
    pub fn includes(&self, bell: BellChoice) -> bool {
        match self {
            BellSelection::Both => true,
            BellSelection::Only(b) => *b == bell,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BellSelection::Both => "both",
            BellSelection::Only(b) => b.name(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub field: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: ModelParams,
    pub t_max: f64,
    pub n_steps: usize,
    pub outcome_i: usize,
    pub outcome_j: usize,
    pub bell: BellSelection,
    pub sweep: Option<Sweep>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            params: ModelParams::default(),
            t_max: 50.0,
            n_steps: 2000,
            outcome_i: 1,
            outcome_j: 1,
            bell: BellSelection::Both,
            sweep: None,
        }
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped;
/// unknown and repeated keys are rejected.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>, ConfigError> {
    let mut out = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| ConfigError::new(format!("line {}", n + 1), format!("expected `key = value`, got `{line}`")))?;
        let key = key.trim();
        if !all_keys().any(|k| k == key) {
            return Err(ConfigError::new(key, "unknown key"));
        }
        if out.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(ConfigError::new(key, format!("repeated on line {}", n + 1)));
        }
    }
    Ok(out)
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    let x: f64 = v.parse().map_err(|_| ConfigError::new(key, format!("`{v}` is not a number")))?;
    if !x.is_finite() {
        return Err(ConfigError::new(key, "must be finite"));
    }
    Ok(x)
}

fn parse_usize(key: &str, v: &str) -> Result<usize, ConfigError> {
    v.parse().map_err(|_| ConfigError::new(key, format!("`{v}` is not a nonnegative integer")))
}

fn parse_bell(v: &str) -> Result<BellSelection, ConfigError> {
    match v {
        "both" => Ok(BellSelection::Both),
        "PSI_EEGG" => Ok(BellSelection::Only(BellChoice::PsiEeGg)),
        "PSI_EGGE" => Ok(BellSelection::Only(BellChoice::PsiEgGe)),
        _ => Err(ConfigError::new("bell", format!("`{v}` is not one of both, PSI_EEGG, PSI_EGGE"))),
    }
}

impl ScenarioConfig {
    /// Builds a validated config from parsed pairs over the defaults.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut cfg = Self::default();
        for (key, v) in pairs {
            match key.as_str() {
                "t_max" => cfg.t_max = parse_f64(key, v)?,
                "n_steps" => cfg.n_steps = parse_usize(key, v)?,
                "outcome_i" => cfg.outcome_i = parse_usize(key, v)?,
                "outcome_j" => cfg.outcome_j = parse_usize(key, v)?,
                "bell" => cfg.bell = parse_bell(v)?,
                "sweep_field" | "sweep_values" => {}
                _ => {
                    let x = parse_f64(key, v)?;
                    if !cfg.params.set(key, x) {
                        return Err(ConfigError::new(key.as_str(), "unknown key"));
                    }
                }
            }
        }
        cfg.sweep = match (pairs.get("sweep_field"), pairs.get("sweep_values")) {
            (None, None) => None,
            (Some(_), None) => return Err(ConfigError::new("sweep_values", "required when sweep_field is set")),
            (None, Some(_)) => return Err(ConfigError::new("sweep_field", "required when sweep_values is set")),
            (Some(field), Some(list)) => {
                let values = list
                    .split(',')
                    .map(|s| parse_f64("sweep_values", s.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Sweep { field: field.clone(), values })
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self, ConfigError> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    /// Reads `path` (if any) and lays `overrides` on top before validating.
    pub fn load(path: Option<&Path>, overrides: &[(String, String)]) -> Result<Self, ConfigError> {
        let mut pairs = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| ConfigError::new("config", format!("cannot read {}: {e}", p.display())))?;
                parse_pairs(&text)?
            }
            None => BTreeMap::new(),
        };
        for (k, v) in overrides {
            if !all_keys().any(|x| x == k) {
                return Err(ConfigError::new(k.as_str(), "unknown key"));
            }
            pairs.insert(k.clone(), v.clone());
        }
        Self::from_pairs(&pairs)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.t_max > 0.0) {
            return Err(ConfigError::new("t_max", "must be positive"));
        }
        if self.n_steps < 2 {
            return Err(ConfigError::new("n_steps", "must be at least 2"));
        }
        for (key, v) in [("outcome_i", self.outcome_i), ("outcome_j", self.outcome_j)] {
            if !(1..=4).contains(&v) {
                return Err(ConfigError::new(key, format!("{v} is outside 1..=4")));
            }
        }
        if let Some(sw) = &self.sweep {
            if !PARAM_FIELDS.contains(&sw.field.as_str()) {
                return Err(ConfigError::new(
                    "sweep_field",
                    format!("`{}` is not one of {}", sw.field, PARAM_FIELDS.join(", ")),
                ));
            }
            if sw.values.is_empty() {
                return Err(ConfigError::new("sweep_values", "empty list"));
            }
        }
        for p in self.points().into_iter().map(|(_, p)| p) {
            derived_frequencies(&p).map_err(|e| ConfigError::new("omega_c", e.to_string()))?;
        }
        Ok(())
    }

    /// Parameter sets to run, tagged with their sweep value.
    pub fn points(&self) -> Vec<(Option<f64>, ModelParams)> {
        match &self.sweep {
            None => vec![(None, self.params)],
            Some(sw) => sw
                .values
                .iter()
                .map(|&v| {
                    let mut p = self.params;
                    p.set(&sw.field, v);
                    (Some(v), p)
                })
                .collect(),
        }
    }

    /// `k·t_max/n_steps` for `k = 0..=n_steps`.
    pub fn grid(&self) -> Vec<f64> {
        (0..=self.n_steps).map(|k| self.t_max * k as f64 / self.n_steps as f64).collect()
    }
}
