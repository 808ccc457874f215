use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::adversary::AttackChoice;
use crate::error::{Error, Result};
use crate::protocol::{BobModel, ProtocolKind, ProtocolParams, Schedule};

pub const DEFAULT_N: usize = 4;
pub const DEFAULT_DELTA: f64 = 0.5;
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            _ => None,
        }
    }

    /// Guess from a file extension, CSV otherwise.
    pub fn for_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub protocol: ProtocolKind,
    /// Carries the master seed.
    pub params: ProtocolParams,
    pub attack: AttackChoice,
    pub trials: usize,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl ExperimentConfig {
    pub fn new(protocol: ProtocolKind, params: ProtocolParams, attack: AttackChoice, trials: usize) -> Self {
        Self {
            protocol,
            params,
            attack,
            trials,
            output: None,
            format: OutputFormat::Csv,
        }
    }

    pub fn with_output(mut self, path: impl Into<PathBuf>, format: OutputFormat) -> Self {
        self.output = Some(path.into());
        self.format = format;
        self
    }

    pub fn master_seed(&self) -> u64 {
        self.params.master_seed
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        self.attack.validate()?;
        self.params.validate(self.protocol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptParameter {
    Theta,
    N,
    Delta,
    Epsilon,
    Trials,
}

impl SweptParameter {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "theta" => Some(Self::Theta),
            "n" => Some(Self::N),
            "delta" => Some(Self::Delta),
            "epsilon" => Some(Self::Epsilon),
            "trials" => Some(Self::Trials),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    pub parameter: SweptParameter,
    pub values: Vec<f64>,
}

impl SweepConfig {
    /// The experiment for one swept value (with per-trial output switched off).
    pub fn at(&self, value: f64) -> Result<ExperimentConfig> {
        let mut cfg = self.base.clone();
        cfg.output = None;
        let whole = |name: &str| {
            if value >= 0.0 && value.fract() == 0.0 {
                Ok(value as usize)
            } else {
                Err(Error::Config(format!("{name} must be a whole number, got {value}")))
            }
        };
        match self.parameter {
            SweptParameter::Theta => {
                if cfg.attack.name.to_ascii_lowercase().replace('-', "_") != "rotation_probe" {
                    return Err(Error::Config(format!(
                        "sweeping theta needs attack rotation_probe, not `{}`",
                        cfg.attack.name
                    )));
                }
                cfg.attack.theta = Some(value);
            }
            SweptParameter::N => cfg.params.n = whole("n")?,
            SweptParameter::Delta => cfg.params.delta = value,
            SweptParameter::Epsilon => cfg.params.epsilon = value,
            SweptParameter::Trials => cfg.trials = whole("trials")?,
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::Config("a sweep needs at least one value".into()));
        }
        for &v in &self.values {
            self.at(v)?;
        }
        Ok(())
    }
}

/// Every setting as an optional key. Config files are flat `key = value` lists of these
/// keys; command-line flags produce the same structure and take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlatConfig {
    pub protocol: Option<String>,
    pub n: Option<usize>,
    pub delta: Option<f64>,
    pub epsilon: Option<f64>,
    pub delta_prime: Option<f64>,
    pub p_ctrl: Option<f64>,
    pub p_test: Option<f64>,
    pub schedule: Option<Schedule>,
    pub bob_model: Option<BobModel>,
    pub attack: Option<String>,
    pub theta: Option<f64>,
    pub forward_matrix: Option<PathBuf>,
    pub backward_matrix: Option<PathBuf>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub sweep: Option<String>,
    pub values: Option<Vec<f64>>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),*) => {
        FlatConfig { $($field: $top.$field.or($base.$field)),* }
    };
}

impl FlatConfig {
    pub fn from_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_str(&std::fs::read_to_string(path)?)
    }

    /// Keys set in `top` win over keys set in `self`.
    pub fn overlay(self, top: FlatConfig) -> FlatConfig {
        let base = self;
        overlay!(base, top; protocol, n, delta, epsilon, delta_prime, p_ctrl, p_test, schedule,
            bob_model, attack, theta, forward_matrix, backward_matrix, trials, seed, out, format,
            sweep, values)
    }

    pub fn to_experiment(&self) -> Result<ExperimentConfig> {
        let protocol = match &self.protocol {
            Some(p) => ProtocolKind::parse(p).ok_or_else(|| Error::Config(format!("unknown protocol `{p}`")))?,
            None => ProtocolKind::P2,
        };
        let mut params = ProtocolParams::new(self.n.unwrap_or(DEFAULT_N), self.delta.unwrap_or(DEFAULT_DELTA))
            .with_epsilon(self.epsilon.unwrap_or(DEFAULT_EPSILON))
            .with_thresholds(self.p_ctrl.unwrap_or(0.0), self.p_test.unwrap_or(0.0))
            .with_schedule(self.schedule.unwrap_or_default())
            .with_bob_model(self.bob_model.unwrap_or_default())
            .with_seed(self.seed.unwrap_or(0));
        params.delta_prime = self.delta_prime;
        let attack = AttackChoice {
            name: self.attack.clone().unwrap_or_else(|| "no_attack".into()),
            theta: self.theta,
            forward_matrix: self.forward_matrix.clone(),
            backward_matrix: self.backward_matrix.clone(),
        };
        let format = match (&self.format, &self.out) {
            (Some(f), _) => OutputFormat::parse(f).ok_or_else(|| Error::Config(format!("unknown format `{f}`")))?,
            (None, Some(path)) => OutputFormat::for_path(path),
            (None, None) => OutputFormat::Csv,
        };
        let cfg = ExperimentConfig {
            protocol,
            params,
            attack,
            trials: self.trials.unwrap_or(DEFAULT_TRIALS),
            output: self.out.clone(),
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_sweep(&self) -> Result<SweepConfig> {
        let name = self.sweep.as_deref().ok_or_else(|| Error::Config("missing key `sweep`".into()))?;
        let parameter = SweptParameter::parse(name).ok_or_else(|| {
            Error::Config(format!("cannot sweep `{name}`; choose theta, n, delta, epsilon or trials"))
        })?;
        let values = self.values.clone().ok_or_else(|| Error::Config("missing key `values`".into()))?;
        let mut base = self.clone();
        if parameter == SweptParameter::Theta && base.theta.is_none() {
            base.theta = values.first().copied();
        }
        base.sweep = None;
        base.values = None;
        let sweep = SweepConfig {
            base: base.to_experiment()?,
            parameter,
            values,
        };
        sweep.validate()?;
        Ok(sweep)
    }
}
