//! Run configuration: preset + overrides, a flat key=value config file, and
//! CLI flags. Precedence: flags > config file > preset > defaults.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use ck_core::scenario::{DimensionlessParams, Preset, Scenario};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Classical,
    Quantum,
    Alicki,
    Proposed,
    Liouville,
    MuState,
}

impl Engine {
    pub fn parse(s: &str) -> Result<Engine> {
        Ok(match s.trim().to_ascii_lowercase().as_str() {
            "classical" => Engine::Classical,
            "quantum" => Engine::Quantum,
            "alicki" => Engine::Alicki,
            "proposed" => Engine::Proposed,
            "liouville" => Engine::Liouville,
            "mu_state" | "mu-state" | "mu" => Engine::MuState,
            other => bail!("unknown engine '{other}'"),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Engine::Classical => "classical",
            Engine::Quantum => "quantum",
            Engine::Alicki => "alicki",
            Engine::Proposed => "proposed",
            Engine::Liouville => "liouville",
            Engine::MuState => "mu_state",
        }
    }
}

pub fn parse_preset(s: &str) -> Result<Preset> {
    Ok(match s.trim().to_ascii_uppercase().as_str() {
        "UO" => Preset::UnderdampedOscillator,
        "OO" => Preset::OverdampedOscillator,
        "HARMONIC" => Preset::Harmonic,
        "DRAG" => Preset::Drag,
        other => bail!("unknown preset '{other}' (expected UO, OO, harmonic or drag)"),
    })
}

/// Axis grid in figure units: ωt for oscillators, λt for drag scenarios.
#[derive(Clone, Copy, Debug)]
pub struct GridRange {
    pub start: f64,
    pub end: f64,
    pub count: usize,
}

impl GridRange {
    pub fn parse(s: &str) -> Result<GridRange> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            bail!("grid must be start:end:count, got '{s}'");
        }
        let g = GridRange {
            start: parts[0].parse().context("grid start")?,
            end: parts[1].parse().context("grid end")?,
            count: parts[2].parse().context("grid count")?,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.end > self.start) || self.start < 0.0 {
            bail!("grid range must satisfy 0 <= start < end");
        }
        if self.count < 2 {
            bail!("grid needs at least 2 points");
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.end - self.start) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| self.start + step * i as f64)
            .collect()
    }
}

impl Default for GridRange {
    fn default() -> Self {
        GridRange {
            start: 0.0,
            end: 10.0,
            count: 1001,
        }
    }
}

/// Fully resolved run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub omega_over_lambda: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon_delta: Option<f64>,
    pub theta: Option<f64>,
    pub mean_energy: Option<f64>,
    pub grid: GridRange,
    pub engines: Vec<Engine>,
    pub mu: Option<f64>,
    pub oracle: bool,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            preset: None,
            omega_over_lambda: None,
            epsilon: None,
            epsilon_delta: None,
            theta: None,
            mean_energy: None,
            grid: GridRange::default(),
            engines: vec![
                Engine::Classical,
                Engine::Quantum,
                Engine::Proposed,
                Engine::Alicki,
            ],
            mu: None,
            oracle: false,
            seed: 0,
        }
    }
}

impl RunConfig {
    /// Apply `key = value` lines from a flat config file (lower precedence
    /// than flags, which the caller applies afterwards).
    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected key = value", path.display(), lineno + 1);
            };
            self.apply_pair(key.trim(), value.trim())
                .with_context(|| format!("{}:{}", path.display(), lineno + 1))?;
        }
        Ok(())
    }

    pub fn apply_pair(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "preset" => self.preset = Some(parse_preset(value)?),
            "omega_over_lambda" => self.omega_over_lambda = Some(value.parse()?),
            "epsilon" => self.epsilon = Some(value.parse()?),
            "epsilon_delta" => self.epsilon_delta = Some(value.parse()?),
            "theta" => self.theta = Some(value.parse()?),
            "mean_energy" => self.mean_energy = Some(value.parse()?),
            "grid" => self.grid = GridRange::parse(value)?,
            "engines" => {
                self.engines = value
                    .split(',')
                    .map(Engine::parse)
                    .collect::<Result<Vec<_>>>()?
            }
            "mu" => self.mu = Some(value.parse()?),
            "oracle" => self.oracle = value.parse()?,
            "seed" => self.seed = value.parse()?,
            other => bail!("unknown config key '{other}'"),
        }
        Ok(())
    }

    /// Dimensionless parameters after preset + overrides.
    pub fn params(&self) -> Result<DimensionlessParams> {
        let mut p = self
            .preset
            .map(|p| p.params())
            .unwrap_or_else(|| Preset::UnderdampedOscillator.params());
        if let Some(v) = self.omega_over_lambda {
            p.omega_over_lambda = v;
        }
        if let Some(v) = self.epsilon {
            p.epsilon = v;
        }
        if let Some(v) = self.epsilon_delta {
            p.epsilon_delta = v;
        }
        if let Some(v) = self.theta {
            p.theta = v;
        }
        if let Some(v) = self.mean_energy {
            p.mean_energy = v;
        }
        Ok(p)
    }

    pub fn scenario(&self) -> Result<Scenario> {
        let params = self.params()?;
        Scenario::new(params).map_err(|e| anyhow::anyhow!("invalid parameters: {e}"))
    }

    /// Key/value view for the metadata sidecar.
    pub fn describe(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        if let Some(p) = self.preset {
            m.insert("preset".into(), p.name().into());
        }
        if let Ok(p) = self.params() {
            m.insert("omega_over_lambda".into(), format!("{}", p.omega_over_lambda));
            m.insert("epsilon".into(), format!("{}", p.epsilon));
            m.insert("epsilon_delta".into(), format!("{}", p.epsilon_delta));
            m.insert("theta".into(), format!("{}", p.theta));
            m.insert("mean_energy".into(), format!("{}", p.mean_energy));
        }
        if let Some(mu) = self.mu {
            m.insert("mu".into(), format!("{mu}"));
        }
        m.insert("seed".into(), format!("{}", self.seed));
        m.insert(
            "engines".into(),
            self.engines
                .iter()
                .map(|e| e.name())
                .collect::<Vec<_>>()
                .join(","),
        );
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flag_precedence() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "preset = OO\ntheta = 0.3  # comment\nseed = 9\n").unwrap();
        let mut cfg = RunConfig::default();
        cfg.apply_file(&path).unwrap();
        assert_eq!(cfg.preset, Some(Preset::OverdampedOscillator));
        assert_eq!(cfg.theta, Some(0.3));
        // flag wins
        cfg.apply_pair("theta", "0.7").unwrap();
        assert_eq!(cfg.params().unwrap().theta, 0.7);
        assert_eq!(cfg.seed, 9);
    }

    #[test]
    fn grid_parsing() {
        let g = GridRange::parse("0:10:11").unwrap();
        assert_eq!(g.values().len(), 11);
        assert!(GridRange::parse("5:1:10").is_err());
        assert!(GridRange::parse("1:2").is_err());
    }

    #[test]
    fn bad_keys_are_reported() {
        let mut cfg = RunConfig::default();
        assert!(cfg.apply_pair("omega", "1").is_err());
    }
}
