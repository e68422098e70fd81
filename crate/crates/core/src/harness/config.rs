use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::farm::{Budget, FarmBounds, PenaltyMode};
use crate::hydro::HydroModel;
use crate::optimizers::OptimizerConfig;

use super::registry::{is_registered, METHODS};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("bad value `{value}` for `{key}`: {reason}")]
    Value {
        key: String,
        value: String,
        reason: String,
    },
    #[error("unknown method `{0}`; registered: {list}", list = METHODS.join(", "))]
    UnknownMethod(String),
    #[error("{0}")]
    Invalid(String),
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// Tunables that override method defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub cma_population: Option<usize>,
    pub cma_sigma: Option<f64>,
    pub population: Option<usize>,
    pub de_weight: Option<f64>,
    pub de_crossover: Option<f64>,
    pub pso_inertia_start: Option<f64>,
    pub pso_inertia_end: Option<f64>,
    pub ea_sigma: Option<f64>,
    pub ea_per_buoy_mutation: Option<bool>,
    pub nm_m_max_evals: Option<usize>,
    pub nm_m_sigma: Option<f64>,
    pub sls_radius_band: Option<f64>,
    pub boa_single_pass: Option<bool>,
}

/// Everything an experiment needs. Built from defaults, then a config
/// file, then command-line flags, each layer overriding the last.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Scenario file path or bundled name.
    pub scenario: String,
    pub n: usize,
    pub methods: Vec<String>,
    pub runs: usize,
    /// Run `r` uses seed `seed + r`.
    pub seed: u64,
    /// Evaluations per run; `None` picks the size-based default.
    pub budget: Option<u64>,
    pub wall_seconds: Option<f64>,
    pub out: PathBuf,
    pub workers: usize,
    /// Landscape lattice step for both PTO axes.
    pub step: f64,
    pub hydro: HydroModel,
    pub penalty: PenaltyMode,
    pub overrides: Overrides,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: "perth_like.scn".into(),
            n: 4,
            methods: METHODS.iter().map(|m| m.to_string()).collect(),
            runs: 10,
            seed: 1,
            budget: None,
            wall_seconds: None,
            out: PathBuf::from("out"),
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            step: 10_000.0,
            hydro: HydroModel::default(),
            penalty: PenaltyMode::Corrected,
            overrides: Overrides::default(),
        }
    }
}

/// Desk-scale evaluation budget: 6000 up to four buoys, 3000 beyond.
pub fn default_budget(n: usize) -> u64 {
    if n <= 4 {
        6000
    } else {
        3000
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: std::fmt::Display,
{
    value.parse::<T>().map_err(|e| ConfigError::Value {
        key: key.into(),
        value: value.into(),
        reason: e.to_string(),
    })
}

fn parse_bool(key: &str, value: &str) -> Result<bool, ConfigError> {
    match value {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(ConfigError::Value {
            key: key.into(),
            value: value.into(),
            reason: "expected true or false".into(),
        }),
    }
}

impl ExperimentConfig {
    /// Sets one `key = value` pair.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        let o = &mut self.overrides;
        match key {
            "scenario" => self.scenario = value.to_string(),
            "n" => self.n = parse(key, value)?,
            "method" | "methods" => {
                self.methods = value
                    .split(',')
                    .map(str::trim)
                    .filter(|m| !m.is_empty())
                    .map(String::from)
                    .collect()
            }
            "runs" => self.runs = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "budget" => self.budget = Some(parse(key, value)?),
            "budget.wall_seconds" => self.wall_seconds = Some(parse(key, value)?),
            "out" => self.out = PathBuf::from(value),
            "workers" => self.workers = parse(key, value)?,
            "step" => self.step = parse(key, value)?,
            "hydro.mass" => self.hydro.mass = parse(key, value)?,
            "hydro.added_mass" => self.hydro.added_mass = parse(key, value)?,
            "hydro.damping_scale" => self.hydro.damping_scale = parse(key, value)?,
            "hydro.reference_frequency" => self.hydro.reference_frequency = parse(key, value)?,
            "hydro.excitation_scale" => self.hydro.excitation_scale = parse(key, value)?,
            "penalty.literal" => {
                self.penalty = if parse_bool(key, value)? {
                    PenaltyMode::Literal
                } else {
                    PenaltyMode::Corrected
                }
            }
            "cma.population" => o.cma_population = Some(parse(key, value)?),
            "cma.sigma" => o.cma_sigma = Some(parse(key, value)?),
            "population" => o.population = Some(parse(key, value)?),
            "de.weight" => o.de_weight = Some(parse(key, value)?),
            "de.crossover" => o.de_crossover = Some(parse(key, value)?),
            "pso.inertia_start" => o.pso_inertia_start = Some(parse(key, value)?),
            "pso.inertia_end" => o.pso_inertia_end = Some(parse(key, value)?),
            "ea.sigma" => o.ea_sigma = Some(parse(key, value)?),
            "ea.per_buoy_mutation" => o.ea_per_buoy_mutation = Some(parse_bool(key, value)?),
            "nm_m.max_evals" => o.nm_m_max_evals = Some(parse(key, value)?),
            "nm_m.sigma" => o.nm_m_sigma = Some(parse(key, value)?),
            "sls.radius_band" => o.sls_radius_band = Some(parse(key, value)?),
            "boa.single_pass" => o.boa_single_pass = Some(parse_bool(key, value)?),
            _ => return Err(ConfigError::UnknownKey(key.to_string())),
        }
        Ok(())
    }

    /// Applies a config file body: one `key = value` per line, `#` comments.
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
                line: i + 1,
                message: format!("expected `key = value`, found `{line}`"),
            })?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<(), ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.runs == 0 {
            return Err(ConfigError::Invalid("runs must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(ConfigError::Invalid("n must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(ConfigError::Invalid("no methods selected".into()));
        }
        if let Some(m) = self.methods.iter().find(|m| !is_registered(m)) {
            return Err(ConfigError::UnknownMethod(m.clone()));
        }
        if !(self.step > 0.0) {
            return Err(ConfigError::Invalid("step must be positive".into()));
        }
        if self.workers == 0 {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        self.hydro
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.optimizer_config(self.seed)
            .validate()
            .map_err(ConfigError::Invalid)?;
        Ok(())
    }

    pub fn bounds(&self) -> FarmBounds {
        FarmBounds::for_buoys(self.n)
    }

    pub fn budget(&self) -> Budget {
        Budget {
            max_evaluations: self.budget.unwrap_or_else(|| default_budget(self.n)),
            wall_seconds: self.wall_seconds,
        }
    }

    /// Seed of run `r`.
    pub fn run_seed(&self, r: usize) -> u64 {
        self.seed.wrapping_add(r as u64)
    }

    /// Method defaults for this farm size with overrides applied.
    pub fn optimizer_config(&self, seed: u64) -> OptimizerConfig {
        let mut c = OptimizerConfig::for_buoys(self.n, seed);
        let o = &self.overrides;
        if let Some(v) = o.cma_population {
            c.cma_population = v;
        }
        if let Some(v) = o.cma_sigma {
            c.cma_sigma = v;
        }
        if let Some(v) = o.population {
            c.population = v;
        }
        if let Some(v) = o.de_weight {
            c.de.weight = v;
        }
        if let Some(v) = o.de_crossover {
            c.de.crossover = v;
        }
        if let Some(v) = o.pso_inertia_start {
            c.pso.inertia_start = v;
        }
        if let Some(v) = o.pso_inertia_end {
            c.pso.inertia_end = v;
        }
        if let Some(v) = o.ea_sigma {
            c.ea.sigma = v;
        }
        if let Some(v) = o.ea_per_buoy_mutation {
            c.ea.per_buoy_mutation = v;
        }
        if let Some(v) = o.nm_m_max_evals {
            c.nm_mutation.max_evals = v;
        }
        if let Some(v) = o.nm_m_sigma {
            c.nm_mutation.sigma = v;
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_overrides_defaults() {
        let mut c = ExperimentConfig::default();
        c.apply_text(
            "# desk run\n n = 16\nmethods = de, sls-nm-b2\nbudget=100 # short\n\
             hydro.damping_scale = 8e4\npenalty.literal = true\nboa.single_pass=yes\n\
             sls.radius_band = 150\npso.inertia_end = 0.3\nbudget.wall_seconds = 5\n",
        )
        .unwrap();
        assert_eq!(c.n, 16);
        assert_eq!(c.methods, vec!["de", "sls-nm-b2"]);
        assert_eq!(c.budget().max_evaluations, 100);
        assert_eq!(c.budget().wall_seconds, Some(5.0));
        assert_eq!(c.hydro.damping_scale, 8e4);
        assert_eq!(c.penalty, PenaltyMode::Literal);
        assert_eq!(c.overrides.boa_single_pass, Some(true));
        assert_eq!(c.overrides.sls_radius_band, Some(150.0));
        assert_eq!(c.optimizer_config(3).pso.inertia_end, 0.3);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn rejects_unknown_keys_and_methods() {
        let mut c = ExperimentConfig::default();
        assert!(matches!(c.set("colour", "red"), Err(ConfigError::UnknownKey(_))));
        assert!(matches!(c.apply_text("just words"), Err(ConfigError::Syntax { line: 1, .. })));
        c.set("methods", "de,gradient-descent").unwrap();
        assert!(matches!(c.validate(), Err(ConfigError::UnknownMethod(m)) if m == "gradient-descent"));
        assert!(c.set("runs", "ten").is_err());
    }

    #[test]
    fn default_budget_depends_on_size() {
        let mut c = ExperimentConfig::default();
        assert_eq!(c.budget().max_evaluations, 6000);
        c.n = 16;
        assert_eq!(c.budget().max_evaluations, 3000);
        assert_eq!(c.run_seed(2), c.seed + 2);
    }
}
