//! Run configuration: a flat `key = value` file whose single section header
//! names the scenario.
//!
//! ```text
//! # comments start with '#'
//! [thresholded_products]
//! preset = desk
//! seed = 7
//! m = 300
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::scenarios::{Preset, Rho, ScenarioParams, SCENARIOS};
use crate::solver::RelaxationPolicy;

const COMMON_KEYS: &[&str] = &[
    "preset",
    "seed",
    "tol",
    "max_iters",
    "mode",
    "relaxation",
    "lambda",
    "epsilon",
    "output_dir",
];

fn scenario_keys(name: &str) -> &'static [&'static str] {
    match name {
        "distortion" => &["n", "gamma1", "gamma2", "band_count", "gamma3"],
        "thresholded_products" => &["n", "m", "gamma", "block"],
        "image" => &[
            "n",
            "tv_factor",
            "rho",
            "blur_size",
            "blur_variance",
            "block",
        ],
        "youla" => &["n", "dim_v1", "dim_v2"],
        _ => &[],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Extrapolated,
    Relaxed,
}

/// A parsed configuration; each value remembers its source line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub scenario: String,
    overrides: BTreeMap<String, (usize, String)>,
}

/// Solver-facing settings extracted from a [`RunConfig`].
#[derive(Debug, Clone)]
pub struct RunSettings {
    pub mode: Mode,
    pub relaxation: Option<RelaxationPolicy>,
    pub lambda: f64,
    pub epsilon: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub output_dir: PathBuf,
}

fn err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

impl RunConfig {
    pub fn new(scenario: &str) -> Result<Self> {
        if !SCENARIOS.contains(&scenario) {
            return Err(err(0, format!("unknown scenario `{scenario}`")));
        }
        Ok(Self {
            scenario: scenario.to_string(),
            overrides: BTreeMap::new(),
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut config: Option<RunConfig> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(name) = content.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
                if config.is_some() {
                    return Err(err(line, "only one scenario section is allowed"));
                }
                let name = name.trim();
                if !SCENARIOS.contains(&name) {
                    return Err(err(
                        line,
                        format!("unknown scenario `{name}`; expected one of {SCENARIOS:?}"),
                    ));
                }
                config = Some(RunConfig::new(name)?);
                continue;
            }
            let cfg = config
                .as_mut()
                .ok_or_else(|| err(line, "expected a `[scenario]` header before any key"))?;
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(line, format!("expected `key = value`, got `{content}`")))?;
            cfg.set_at(line, key.trim(), value.trim())?;
        }
        config.ok_or_else(|| err(0, "missing `[scenario]` header"))
    }

    /// Sets a key as if it appeared on line `line` (0 for command-line
    /// overrides).
    pub fn set_at(&mut self, line: usize, key: &str, value: &str) -> Result<()> {
        if !COMMON_KEYS.contains(&key) && !scenario_keys(&self.scenario).contains(&key) {
            return Err(err(
                line,
                format!("unknown key `{key}` for scenario `{}`", self.scenario),
            ));
        }
        if value.is_empty() {
            return Err(err(line, format!("empty value for `{key}`")));
        }
        if self
            .overrides
            .insert(key.to_string(), (line, value.to_string()))
            .is_some()
            && line > 0
        {
            return Err(err(line, format!("duplicate key `{key}`")));
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        self.set_at(0, key, value)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.overrides.get(key).map(|(_, v)| v.as_str())
    }

    fn value<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.overrides.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| err(*line, format!("invalid value `{v}` for `{key}`"))),
        }
    }

    fn put<T: std::str::FromStr>(&self, key: &str, slot: &mut T) -> Result<()> {
        if let Some(v) = self.value(key)? {
            *slot = v;
        }
        Ok(())
    }

    pub fn preset(&self) -> Result<Preset> {
        match self.overrides.get("preset") {
            None => Ok(Preset::Desk),
            Some((_, v)) if v == "desk" => Ok(Preset::Desk),
            Some((_, v)) if v == "full" => Ok(Preset::Full),
            Some((line, v)) => Err(err(
                *line,
                format!("preset must be desk or full, got `{v}`"),
            )),
        }
    }

    /// Scenario parameters: the preset with every override applied.
    pub fn scenario_params(&self) -> Result<ScenarioParams> {
        let mut params = ScenarioParams::preset(&self.scenario, self.preset()?)?;
        match &mut params {
            ScenarioParams::Distortion(p) => {
                self.put("n", &mut p.n)?;
                self.put("gamma1", &mut p.gamma1)?;
                self.put("gamma2", &mut p.gamma2)?;
                self.put("band_count", &mut p.band_count)?;
                self.put("gamma3", &mut p.gamma3)?;
                self.put("seed", &mut p.seed)?;
                self.put("tol", &mut p.tol)?;
                self.put("max_iters", &mut p.max_iters)?;
            }
            ScenarioParams::ThresholdedProducts(p) => {
                self.put("n", &mut p.n)?;
                self.put("m", &mut p.m)?;
                self.put("gamma", &mut p.gamma)?;
                self.put("block", &mut p.block)?;
                self.put("seed", &mut p.seed)?;
                self.put("tol", &mut p.tol)?;
                self.put("max_iters", &mut p.max_iters)?;
            }
            ScenarioParams::Image(p) => {
                self.put("n", &mut p.n)?;
                self.put("tv_factor", &mut p.tv_factor)?;
                self.put("blur_size", &mut p.blur_size)?;
                self.put("blur_variance", &mut p.blur_variance)?;
                self.put("block", &mut p.block)?;
                self.put("seed", &mut p.seed)?;
                self.put("tol", &mut p.tol)?;
                self.put("max_iters", &mut p.max_iters)?;
                if let Some((line, v)) = self.overrides.get("rho") {
                    p.rho = parse_rho(v).ok_or_else(|| {
                        err(
                            *line,
                            format!("rho must be a number or `keep:<fraction>`, got `{v}`"),
                        )
                    })?;
                }
            }
            ScenarioParams::Youla(p) => {
                self.put("n", &mut p.n)?;
                self.put("dim_v1", &mut p.dim_v1)?;
                self.put("dim_v2", &mut p.dim_v2)?;
                self.put("seed", &mut p.seed)?;
                self.put("tol", &mut p.tol)?;
                self.put("max_iters", &mut p.max_iters)?;
            }
        }
        Ok(params)
    }

    pub fn settings(&self) -> Result<RunSettings> {
        let mode = match self.overrides.get("mode") {
            None => Mode::Extrapolated,
            Some((_, v)) if v == "extrapolated" => Mode::Extrapolated,
            Some((_, v)) if v == "relaxed" => Mode::Relaxed,
            Some((line, v)) => {
                return Err(err(
                    *line,
                    format!("mode must be extrapolated or relaxed, got `{v}`"),
                ))
            }
        };
        let lambda: Option<f64> = self.value("lambda")?;
        let relaxation = match self.overrides.get("relaxation") {
            None => None,
            Some((_, v)) if v == "emopsp" => Some(RelaxationPolicy::Emopsp),
            Some((_, v)) if v == "constant" => {
                Some(RelaxationPolicy::Constant(lambda.unwrap_or(1.0)))
            }
            Some((line, v)) => {
                return Err(err(
                    *line,
                    format!("relaxation must be emopsp or constant, got `{v}`"),
                ))
            }
        };
        Ok(RunSettings {
            mode,
            relaxation,
            lambda: lambda.unwrap_or(1.0),
            epsilon: self.value("epsilon")?,
            tol: self.value("tol")?,
            max_iters: self.value("max_iters")?,
            output_dir: self
                .get("output_dir")
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(format!("out_{}", self.scenario))),
        })
    }
}

fn parse_rho(v: &str) -> Option<Rho> {
    match v.strip_prefix("keep:") {
        Some(f) => f.trim().parse().ok().map(Rho::KeepFraction),
        None => v.parse().ok().map(Rho::Fixed),
    }
}
