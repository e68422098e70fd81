//! Wave climates: the (direction, frequency) grid a farm is evaluated over,
//! its probability weights, and the dispersion relation.
//!
//! Scenario files are line-oriented UTF-8 text:
//!
//! ```text
//! # comment
//! scenario perth_like amplitude=1
//! directions: 202.5 212.5 222.5
//! frequencies: 0.5 0.6
//! 0.1 0.2
//! 0.3 0.1
//! 0.2 0.1
//! ```
//!
//! One weight row per direction, one column per frequency.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

/// Gravitational acceleration used by the dispersion relation (m/s²).
pub const GRAVITY: f64 = 9.81;

/// Weight sums closer than this to one are accepted verbatim.
const EXACT_SUM_TOL: f64 = 1e-9;
/// Weight sums closer than this to one are renormalized; anything else is rejected.
const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("failed to read scenario file: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("weights sum to {sum}, expected 1")]
    WeightSum { sum: f64 },
    #[error("negative or non-finite weight {value} at direction {direction}, frequency {frequency}")]
    BadWeight {
        value: f64,
        direction: usize,
        frequency: usize,
    },
    #[error("{axis} must be strictly increasing")]
    NonMonotone { axis: &'static str },
    #[error("{0}")]
    Invalid(String),
    #[error("wave frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
}

/// Site wave climate. Immutable once built; all constructors validate.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveScenario {
    name: String,
    amplitude: f64,
    /// Degrees in [0, 360), strictly increasing.
    directions: Vec<f64>,
    /// rad/s, strictly increasing and positive.
    frequencies: Vec<f64>,
    /// Row-major, `directions.len()` rows by `frequencies.len()` columns.
    weights: Vec<f64>,
}

impl WaveScenario {
    /// Builds a scenario from a direction-major weight table.
    ///
    /// Weights must already sum to one within 1e-9.
    pub fn new(
        name: impl Into<String>,
        amplitude: f64,
        directions: Vec<f64>,
        frequencies: Vec<f64>,
        weights: Vec<Vec<f64>>,
    ) -> Result<Self, ScenarioError> {
        let flat = flatten(&weights, directions.len(), frequencies.len())?;
        let s = Self {
            name: name.into(),
            amplitude,
            directions,
            frequencies,
            weights: flat,
        };
        s.validate_axes()?;
        let sum = s.validate_weights()?;
        if (sum - 1.0).abs() > EXACT_SUM_TOL {
            return Err(ScenarioError::WeightSum { sum });
        }
        Ok(s)
    }

    /// Single direction, single frequency, unit weight.
    pub fn monochromatic(
        name: impl Into<String>,
        amplitude: f64,
        theta_deg: f64,
        omega: f64,
    ) -> Result<Self, ScenarioError> {
        Self::new(name, amplitude, vec![theta_deg], vec![omega], vec![vec![1.0]])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.frequencies
    }

    pub fn weight(&self, direction: usize, frequency: usize) -> f64 {
        self.weights[direction * self.frequencies.len() + frequency]
    }

    /// Number of (direction, frequency) cells.
    pub fn cell_count(&self) -> usize {
        self.weights.len()
    }

    /// Direction carrying the largest marginal weight.
    pub fn dominant_direction(&self) -> f64 {
        let nf = self.frequencies.len();
        let mut best = (0, f64::NEG_INFINITY);
        for d in 0..self.directions.len() {
            let m: f64 = self.weights[d * nf..(d + 1) * nf].iter().sum();
            if m > best.1 {
                best = (d, m);
            }
        }
        self.directions[best.0]
    }

    /// Returns a copy with a different amplitude.
    pub fn with_amplitude(&self, amplitude: f64) -> Result<Self, ScenarioError> {
        if !(amplitude.is_finite() && amplitude > 0.0) {
            return Err(ScenarioError::Invalid(format!(
                "amplitude must be positive, got {amplitude}"
            )));
        }
        Ok(Self {
            amplitude,
            ..self.clone()
        })
    }

    fn validate_axes(&self) -> Result<(), ScenarioError> {
        if self.name.is_empty() || self.name.chars().any(char::is_whitespace) {
            return Err(ScenarioError::Invalid(
                "scenario name must be a non-empty token".into(),
            ));
        }
        if !(self.amplitude.is_finite() && self.amplitude > 0.0) {
            return Err(ScenarioError::Invalid(format!(
                "amplitude must be positive, got {}",
                self.amplitude
            )));
        }
        if self.directions.is_empty() || self.frequencies.is_empty() {
            return Err(ScenarioError::Invalid(
                "need at least one direction and one frequency".into(),
            ));
        }
        if self
            .directions
            .iter()
            .any(|d| !d.is_finite() || *d < 0.0 || *d >= 360.0)
        {
            return Err(ScenarioError::Invalid(
                "directions must lie in [0, 360)".into(),
            ));
        }
        if let Some(w) = self.frequencies.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(ScenarioError::NonPositiveFrequency(*w));
        }
        if !strictly_increasing(&self.directions) {
            return Err(ScenarioError::NonMonotone { axis: "directions" });
        }
        if !strictly_increasing(&self.frequencies) {
            return Err(ScenarioError::NonMonotone {
                axis: "frequencies",
            });
        }
        Ok(())
    }

    fn validate_weights(&self) -> Result<f64, ScenarioError> {
        let nf = self.frequencies.len();
        for (i, &w) in self.weights.iter().enumerate() {
            if !(w.is_finite() && w >= 0.0) {
                return Err(ScenarioError::BadWeight {
                    value: w,
                    direction: i / nf,
                    frequency: i % nf,
                });
            }
        }
        Ok(self.weights.iter().sum())
    }

    /// Parses scenario text. Weights summing within 1e-6 of one are
    /// renormalized; within 1e-9 they are kept verbatim.
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let mut header: Option<(String, f64)> = None;
        let mut directions: Option<Vec<f64>> = None;
        let mut frequencies: Option<Vec<f64>> = None;
        let mut rows: Vec<Vec<f64>> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let perr = |message: String| ScenarioError::Parse {
                line: line_no,
                message,
            };
            if header.is_none() {
                let mut parts = line.split_whitespace();
                if parts.next() != Some("scenario") {
                    return Err(perr("expected `scenario <name> amplitude=<float>`".into()));
                }
                let name = parts
                    .next()
                    .ok_or_else(|| perr("missing scenario name".into()))?
                    .to_string();
                let mut amplitude = 1.0;
                for p in parts {
                    match p.split_once('=') {
                        Some(("amplitude", v)) => {
                            amplitude = v
                                .parse()
                                .map_err(|_| perr(format!("bad amplitude `{v}`")))?
                        }
                        _ => return Err(perr(format!("unexpected header token `{p}`"))),
                    }
                }
                header = Some((name, amplitude));
            } else if let Some(rest) = line.strip_prefix("directions:") {
                directions = Some(parse_floats(rest).map_err(perr)?);
            } else if let Some(rest) = line.strip_prefix("frequencies:") {
                frequencies = Some(parse_floats(rest).map_err(perr)?);
            } else {
                if directions.is_none() || frequencies.is_none() {
                    return Err(perr(
                        "weight rows must follow the directions and frequencies lines".into(),
                    ));
                }
                let row = parse_floats(line).map_err(perr)?;
                let nf = frequencies.as_ref().map_or(0, Vec::len);
                if row.len() != nf {
                    return Err(perr(format!("expected {nf} weights, found {}", row.len())));
                }
                rows.push(row);
            }
        }

        let (name, amplitude) = header.ok_or(ScenarioError::Parse {
            line: 0,
            message: "missing scenario header".into(),
        })?;
        let directions = directions.ok_or(ScenarioError::Parse {
            line: 0,
            message: "missing directions line".into(),
        })?;
        let frequencies = frequencies.ok_or(ScenarioError::Parse {
            line: 0,
            message: "missing frequencies line".into(),
        })?;
        if rows.len() != directions.len() {
            return Err(ScenarioError::Parse {
                line: 0,
                message: format!(
                    "expected {} weight rows, found {}",
                    directions.len(),
                    rows.len()
                ),
            });
        }

        let weights = flatten(&rows, directions.len(), frequencies.len())?;
        let mut s = Self {
            name,
            amplitude,
            directions,
            frequencies,
            weights,
        };
        s.validate_axes()?;
        let sum = s.validate_weights()?;
        let gap = (sum - 1.0).abs();
        if gap > RENORMALIZE_TOL {
            return Err(ScenarioError::WeightSum { sum });
        }
        if gap > EXACT_SUM_TOL {
            for w in &mut s.weights {
                *w /= sum;
            }
        }
        Ok(s)
    }

    /// Serializes to the scenario text format. Values use shortest
    /// round-trip decimal form, so `parse(to_text(s)) == s`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "scenario {} amplitude={}", self.name, self.amplitude);
        let _ = writeln!(out, "directions: {}", join(&self.directions));
        let _ = writeln!(out, "frequencies: {}", join(&self.frequencies));
        for row in self.weights.chunks(self.frequencies.len()) {
            let _ = writeln!(out, "{}", join(row));
        }
        out
    }
}

/// Reads and validates a scenario file.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<WaveScenario, ScenarioError> {
    let text = std::fs::read_to_string(path)?;
    WaveScenario::parse(&text)
}

pub fn write_scenario(path: impl AsRef<Path>, scenario: &WaveScenario) -> Result<(), ScenarioError> {
    std::fs::write(path, scenario.to_text())?;
    Ok(())
}

/// Deep-water dispersion, k = ω²/g.
pub fn wavenumber(omega: f64) -> Result<f64, ScenarioError> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(ScenarioError::NonPositiveFrequency(omega));
    }
    Ok(omega * omega / GRAVITY)
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[0] < w[1])
}

fn parse_floats(s: &str) -> Result<Vec<f64>, String> {
    s.split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|_| format!("bad number `{t}`")))
        .collect()
}

fn join(v: &[f64]) -> String {
    v.iter().map(f64::to_string).collect::<Vec<_>>().join(" ")
}

fn flatten(rows: &[Vec<f64>], nd: usize, nf: usize) -> Result<Vec<f64>, ScenarioError> {
    if rows.len() != nd || rows.iter().any(|r| r.len() != nf) {
        return Err(ScenarioError::Invalid(format!(
            "weight table must be {nd} x {nf}"
        )));
    }
    Ok(rows.iter().flatten().copied().collect())
}

/// Scenarios shipped with the crate.
pub mod bundled {
    use super::WaveScenario;

    pub const PERTH_LIKE: &str = include_str!("../scenarios/perth_like.scn");
    pub const SYDNEY_LIKE: &str = include_str!("../scenarios/sydney_like.scn");
    pub const MONOCHROMATIC: &str = include_str!("../scenarios/monochromatic.scn");

    /// Looks up a bundled scenario by name, with or without the `.scn` suffix.
    pub fn by_name(name: &str) -> Option<WaveScenario> {
        let stem = name.strip_suffix(".scn").unwrap_or(name);
        let text = match stem {
            "perth_like" => PERTH_LIKE,
            "sydney_like" => SYDNEY_LIKE,
            "monochromatic" => MONOCHROMATIC,
            _ => return None,
        };
        Some(WaveScenario::parse(text).expect("bundled scenario is valid"))
    }

    pub fn perth_like() -> WaveScenario {
        by_name("perth_like").unwrap()
    }

    pub fn sydney_like() -> WaveScenario {
        by_name("sydney_like").unwrap()
    }

    /// θ = 0°, ω = 1 rad/s, unit weight.
    pub fn monochromatic() -> WaveScenario {
        by_name("monochromatic").unwrap()
    }
}

/// Loads from a path when it exists, otherwise falls back to a bundled
/// scenario of the same file name.
pub fn resolve_scenario(name: &str) -> Result<WaveScenario, ScenarioError> {
    let path = Path::new(name);
    if path.exists() {
        return load_scenario(path);
    }
    let file = path.file_name().and_then(|f| f.to_str()).unwrap_or(name);
    bundled::by_name(file).ok_or_else(|| {
        ScenarioError::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("no scenario file or bundled scenario named `{name}`"),
        ))
    })
}
