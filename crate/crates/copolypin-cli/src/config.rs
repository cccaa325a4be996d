//! Run configuration: JSON schema, defaults, and CLI-flag merging.
//!
//! A run is a pure function of the [`RunConfig`] value, so the config both
//! round-trips through JSON bit-exactly and doubles as the reproducibility
//! record for every artifact the binary writes.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use copolypin::{DisorderLaw, ExcursionLaw, ModelParams};

use crate::CliError;

/// Default head cutoff for the infinite-support excursion laws.
const DEFAULT_CUTOFF: usize = 100_000;

fn default_cutoff() -> usize {
    DEFAULT_CUTOFF
}

/// Coupling constants of the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub beta_hat: f64,
    pub h_hat: f64,
    pub beta_bar: f64,
    pub h_bar: f64,
}

impl ModelConfig {
    pub fn params(&self) -> Result<ModelParams, CliError> {
        ModelParams {
            beta_hat: self.beta_hat,
            h_hat: self.h_hat,
            beta_bar: self.beta_bar,
            h_bar: self.h_bar,
        }
        .validated()
        .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Excursion-law selector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RhoSpec {
    /// Simple-random-walk return law, supported on even lengths.
    Srw {
        #[serde(default = "default_cutoff")]
        cutoff: usize,
    },
    /// Pure power tail `rho(n) = c * n^{-alpha}` on all positive lengths.
    Power {
        alpha: f64,
        #[serde(default = "default_cutoff")]
        cutoff: usize,
    },
    /// Finite table of probabilities for lengths `1..=probs.len()`.
    Table { probs: Vec<f64> },
}

impl Default for RhoSpec {
    fn default() -> Self {
        RhoSpec::Power {
            alpha: 1.5,
            cutoff: DEFAULT_CUTOFF,
        }
    }
}

impl RhoSpec {
    pub fn build(&self) -> Result<ExcursionLaw, CliError> {
        let law = match self {
            RhoSpec::Srw { cutoff } => Ok(ExcursionLaw::srw_return_law(*cutoff)),
            RhoSpec::Power { alpha, cutoff } => ExcursionLaw::power_law(*alpha, *cutoff),
            RhoSpec::Table { probs } => ExcursionLaw::from_table(probs),
        };
        law.map_err(|e| CliError::Config(e.to_string()))
    }

    /// Parses the compact flag syntax: `srw`, `srw:CUTOFF`, `power:ALPHA`,
    /// `power:ALPHA:CUTOFF`, `table:P1,P2,...`, or inline JSON.
    pub fn parse_flag(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| CliError::Config(format!("bad rho JSON: {e}")));
        }
        let mut parts = text.split(':');
        let kind = parts.next().unwrap_or_default();
        match kind {
            "srw" => {
                let cutoff = match parts.next() {
                    Some(c) => parse_num(c, "srw cutoff")?,
                    None => DEFAULT_CUTOFF,
                };
                reject_extra(parts, text)?;
                Ok(RhoSpec::Srw { cutoff })
            }
            "power" => {
                let alpha = parts
                    .next()
                    .ok_or_else(|| {
                        CliError::Config("power law needs an exponent, e.g. power:1.5".into())
                    })
                    .and_then(|a| parse_num(a, "power exponent"))?;
                let cutoff = match parts.next() {
                    Some(c) => parse_num(c, "power cutoff")?,
                    None => DEFAULT_CUTOFF,
                };
                reject_extra(parts, text)?;
                Ok(RhoSpec::Power { alpha, cutoff })
            }
            "table" => {
                let body = parts.next().ok_or_else(|| {
                    CliError::Config("table law needs probabilities, e.g. table:0.5,0.5".into())
                })?;
                reject_extra(parts, text)?;
                let probs = body
                    .split(',')
                    .map(|p| parse_num(p, "table probability"))
                    .collect::<Result<Vec<f64>, _>>()?;
                Ok(RhoSpec::Table { probs })
            }
            other => Err(CliError::Config(format!(
                "unknown excursion law '{other}' (expected srw, power, or table)"
            ))),
        }
    }
}

/// Letter-law selector for one disorder sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DisorderSpec {
    #[serde(rename = "pm1")]
    PmOne,
    #[serde(rename = "gaussian")]
    Gaussian,
    #[serde(rename = "discrete")]
    Discrete { atoms: Vec<f64>, weights: Vec<f64> },
}

impl Default for DisorderSpec {
    fn default() -> Self {
        DisorderSpec::PmOne
    }
}

impl DisorderSpec {
    pub fn build(&self) -> Result<DisorderLaw, CliError> {
        match self {
            DisorderSpec::PmOne => Ok(DisorderLaw::pm_one()),
            DisorderSpec::Gaussian => Ok(DisorderLaw::gaussian()),
            DisorderSpec::Discrete { atoms, weights } => {
                DisorderLaw::standardize(atoms, weights).map_err(|e| CliError::Config(e.to_string()))
            }
        }
    }

    /// Parses `pm1`, `gaussian`, or inline JSON for the discrete case.
    pub fn parse_flag(text: &str) -> Result<Self, CliError> {
        let text = text.trim();
        if text.starts_with('{') {
            return serde_json::from_str(text)
                .map_err(|e| CliError::Config(format!("bad disorder JSON: {e}")));
        }
        match text {
            "pm1" => Ok(DisorderSpec::PmOne),
            "gaussian" => Ok(DisorderSpec::Gaussian),
            other => Err(CliError::Config(format!(
                "unknown disorder law '{other}' (expected pm1, gaussian, or discrete JSON)"
            ))),
        }
    }
}

/// Inclusive linear grid over the scanned coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            start: -1.0,
            stop: 2.0,
            points: 25,
        }
    }
}

impl GridConfig {
    /// Materializes the grid. Zero points is allowed and yields an empty
    /// grid, which downstream writers turn into a header-only CSV.
    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.start],
            p => (0..p)
                .map(|i| self.start + (self.stop - self.start) * i as f64 / (p - 1) as f64)
                .collect(),
        }
    }
}

/// Complete description of one run. Flags override file values, which
/// override the defaults listed on each field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub rho: RhoSpec,
    pub disorder_hat: DisorderSpec,
    pub disorder_bar: DisorderSpec,
    /// Largest chain length for quenched estimates. Default 4096.
    pub n: usize,
    /// Independent disorder replicas. Default 24.
    pub replicas: usize,
    /// Master seed for every random draw. Default 0.
    pub seed: u64,
    /// Series and root tolerance. Default 1e-12.
    pub tol: f64,
    /// Worker threads; 0 picks the machine default. Default 0.
    pub threads: usize,
    /// Scan grid for the curve subcommands.
    pub grid: GridConfig,
    /// Excess free energy for the variational evaluations; defaults to the
    /// annealed localization threshold of the configured model.
    pub g: Option<f64>,
    /// Tail exponent override when the excursion law does not expose one.
    pub alpha: Option<f64>,
    /// Truncation length for gap certificates. Default 8.
    pub tr: usize,
    /// Longest excursion kept by the finite-alphabet maximizer. Default 12.
    pub max_len: usize,
    /// Number of polymer paths to sample. Default 1.
    pub paths: usize,
    /// Output file; subcommands that emit CSV require it, JSON falls back
    /// to stdout.
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelConfig::default(),
            rho: RhoSpec::default(),
            disorder_hat: DisorderSpec::default(),
            disorder_bar: DisorderSpec::default(),
            n: 4096,
            replicas: 24,
            seed: 0,
            tol: 1e-12,
            threads: 0,
            grid: GridConfig::default(),
            g: None,
            alpha: None,
            tr: 8,
            max_len: 12,
            paths: 1,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("bad config {}: {e}", path.display())))
    }

    pub fn params(&self) -> Result<ModelParams, CliError> {
        self.model.params()
    }

    pub fn rho(&self) -> Result<ExcursionLaw, CliError> {
        self.rho.build()
    }

    pub fn law_hat(&self) -> Result<DisorderLaw, CliError> {
        self.disorder_hat.build()
    }

    pub fn law_bar(&self) -> Result<DisorderLaw, CliError> {
        self.disorder_bar.build()
    }

    /// Tail exponent for the bound formulas, from the law itself or the
    /// explicit override.
    pub fn tail_exponent(&self, rho: &ExcursionLaw) -> Result<f64, CliError> {
        match self.alpha.or_else(|| rho.alpha()) {
            Some(a) => Ok(a),
            None => Err(CliError::Config(
                "this excursion law has no tail exponent; pass --alpha".into(),
            )),
        }
    }
}

fn parse_num<T: std::str::FromStr>(text: &str, what: &str) -> Result<T, CliError>
where
    T::Err: fmt::Display,
{
    text.trim()
        .parse()
        .map_err(|e| CliError::Config(format!("bad {what} '{text}': {e}")))
}

fn reject_extra<'a>(mut parts: impl Iterator<Item = &'a str>, text: &str) -> Result<(), CliError> {
    if parts.next().is_some() {
        return Err(CliError::Config(format!("trailing fields in '{text}'")));
    }
    Ok(())
}
