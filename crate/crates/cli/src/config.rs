use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use randlind::ensembles::EnsembleKind;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    SpectrumScatter,
    GapScaling,
    DffCompare,
    Density,
    GapCurve,
    LemmaCheck,
    MomentCheck,
    SelfAveraging,
    SpecfunCheck,
}

impl Experiment {
    /// Experiments that draw random matrices and therefore need a seed.
    pub fn is_ensemble(self) -> bool {
        !matches!(self, Experiment::Density | Experiment::GapCurve | Experiment::SpecfunCheck)
    }

    pub fn name(self) -> &'static str {
        match self {
            Experiment::SpectrumScatter => "spectrum-scatter",
            Experiment::GapScaling => "gap-scaling",
            Experiment::DffCompare => "dff-compare",
            Experiment::Density => "density",
            Experiment::GapCurve => "gap-curve",
            Experiment::LemmaCheck => "lemma-check",
            Experiment::MomentCheck => "moment-check",
            Experiment::SelfAveraging => "self-averaging",
            Experiment::SpecfunCheck => "specfun-check",
        }
    }
}

/// Which generator an experiment acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Model {
    /// Single-jump dissipator with a jump operator drawn from `kind`.
    Dissipator,
    /// Σₐ 𝓓[Lₐ] with `m` Ginibre jumps.
    MultiDissipator,
    /// −i[H, ·] + γ𝓓[L] with GUE H and Ginibre L.
    Lindbladian,
    /// −i[H, ·] with GUE H.
    Lvn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

impl GridConfig {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|k| {
                let s = k as f64 / (n - 1) as f64;
                if self.log {
                    self.min * (self.max / self.min).powf(s)
                } else {
                    self.min + (self.max - self.min) * s
                }
            })
            .collect()
    }

    fn validate(&self, name: &str, positive: bool) -> Result<()> {
        if self.points == 0 {
            bail!("{name}.points must be at least 1");
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            bail!("{name} needs finite min <= max, got [{}, {}]", self.min, self.max);
        }
        if (self.log || positive) && !(self.min > 0.0) {
            bail!("{name}.min must be positive, got {}", self.min);
        }
        if !positive && self.min < 0.0 {
            bail!("{name}.min must be non-negative, got {}", self.min);
        }
        Ok(())
    }
}

/// Evaluation times.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimesConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub log: bool,
}

impl TimesConfig {
    fn as_grid(&self) -> GridConfig {
        GridConfig { min: self.t_min, max: self.t_max, points: self.points, log: self.log }
    }

    pub fn values(&self) -> Vec<f64> {
        self.as_grid().values()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default = "default_kind")]
    pub kind: EnsembleKind,
    #[serde(default = "default_model")]
    pub model: Model,
    /// System dimension N.
    #[serde(default)]
    pub n: Option<usize>,
    /// Dimensions for scaling experiments.
    #[serde(default)]
    pub n_list: Option<Vec<usize>>,
    #[serde(default = "one")]
    pub v: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_m")]
    pub m: usize,
    #[serde(default = "default_times")]
    pub times: TimesConfig,
    /// Evaluation time for self-averaging.
    #[serde(default = "one")]
    pub t: f64,
    /// Abscissa grid for density and gap-curve output.
    #[serde(default)]
    pub grid: Option<GridConfig>,
    /// Moment orders for lemma-check and moment-check.
    #[serde(default = "default_orders")]
    pub orders: Vec<usize>,
    #[serde(default = "default_samples")]
    pub n_samples: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
}

fn default_kind() -> EnsembleKind {
    EnsembleKind::ComplexGinibre
}
fn default_model() -> Model {
    Model::Dissipator
}
fn one() -> f64 {
    1.0
}
fn default_gamma() -> f64 {
    0.1
}
fn default_m() -> usize {
    1
}
fn default_times() -> TimesConfig {
    TimesConfig { t_min: 0.05, t_max: 5.0, points: 40, log: true }
}
fn default_orders() -> Vec<usize> {
    vec![2, 3]
}
fn default_samples() -> usize {
    1
}
fn default_output() -> PathBuf {
    PathBuf::from("out")
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.experiment.is_ensemble() && self.seed.is_none() {
            bail!("experiment {} draws random matrices; pass --seed", self.experiment.name());
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            bail!("v must be positive and finite, got {}", self.v);
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            bail!("gamma must be positive and finite, got {}", self.gamma);
        }
        if self.m == 0 {
            bail!("m must be at least 1");
        }
        if self.n_samples == 0 {
            bail!("n_samples must be at least 1");
        }
        if self.n == Some(0) || self.n_list.as_ref().is_some_and(|l| l.is_empty() || l.contains(&0)) {
            bail!("dimensions must be positive");
        }
        self.times.as_grid().validate("times", false)?;
        if !(self.t > 0.0 && self.t.is_finite()) {
            bail!("t must be positive and finite, got {}", self.t);
        }
        if let Some(g) = &self.grid {
            g.validate("grid", self.experiment == Experiment::GapCurve)?;
        }
        if self.orders.is_empty() {
            bail!("orders must not be empty");
        }
        use Experiment::*;
        match self.experiment {
            SpectrumScatter | DffCompare | MomentCheck if self.n.is_none() => {
                bail!("experiment {} needs n", self.experiment.name())
            }
            GapScaling | LemmaCheck | SelfAveraging if self.n_list.is_none() => {
                bail!("experiment {} needs n_list", self.experiment.name())
            }
            SelfAveraging if self.n_samples < 2 => bail!("self-averaging needs n_samples >= 2"),
            _ => Ok(()),
        }
    }

    pub fn dim(&self) -> usize {
        self.n.unwrap_or(0)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }
}

/// Parses a `--set` value: JSON when it parses, a plain string otherwise.
fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Applies `key=value` (dotted keys reach nested tables) to a JSON object.
pub fn apply_override(root: &mut Value, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .with_context(|| format!("--set expects key=value, got {assignment:?}"))?;
    let mut node = root;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            bail!("empty key segment in {key:?}");
        }
        let obj = node
            .as_object_mut()
            .with_context(|| format!("{key:?}: {} is not a table", parts[..i].join(".")))?;
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), parse_value(raw));
            return Ok(());
        }
        node = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Default::default()));
    }
    unreachable!("split always yields one segment")
}

/// Layers the config file, `--set` overrides and explicit flags, then
/// deserializes and validates.
pub fn assemble(
    file: Option<&str>,
    experiment: Option<&str>,
    sets: &[String],
    seed: Option<u64>,
    output: Option<&str>,
) -> Result<ExperimentConfig> {
    let mut root = match file {
        Some(text) => serde_json::from_str(text).context("config file is not valid JSON")?,
        None => Value::Object(Default::default()),
    };
    if !root.is_object() {
        bail!("config file must hold a JSON object");
    }
    // so that `--set times.points=…` alone edits the defaults
    let obj = root.as_object_mut().expect("checked above");
    if !obj.contains_key("times") {
        obj.insert("times".into(), serde_json::to_value(default_times())?);
    }
    for s in sets {
        apply_override(&mut root, s)?;
    }
    let obj = root.as_object_mut().expect("checked above");
    if let Some(e) = experiment {
        obj.insert("experiment".into(), Value::String(e.into()));
    }
    if let Some(s) = seed {
        obj.insert("seed".into(), Value::from(s));
    }
    if let Some(o) = output {
        obj.insert("output".into(), Value::String(o.into()));
    }
    let cfg: ExperimentConfig = serde_json::from_value(root).context("invalid configuration")?;
    cfg.validate()?;
    Ok(cfg)
}
