use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::channels::{
    amplitude_damping, classical_channel, dephasing, depolarizing, QuantumChannel,
};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;
use crate::pgm::Ensemble;
use crate::qsvt::SqrtMode;
use crate::random::{self, InstanceRng};

pub const CONFIG_VERSION: u32 = 1;

/// Desk-scale cap on the `W̃` register dimension in sweeps.
pub const MAX_SWEEP_DIM: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub eps: f64,
    #[serde(default = "one")]
    pub repetitions: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Adds wall time to the record, which makes output non-reproducible.
    #[serde(default)]
    pub record_timing: bool,
    pub experiment: Experiment,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum Experiment {
    Recover(RecoverParams),
    Pgm(PgmParams),
    Search(SearchParams),
    Sweep(SweepParams),
    Bayes(BayesSpec),
}

impl Experiment {
    /// Small built-in experiment of each kind, used when no config file is given.
    pub fn default_for(kind: &str) -> Option<Self> {
        Some(match kind {
            "recover" => Experiment::Recover(RecoverParams {
                channel: ChannelSpec::Random { d_in: 2, d_out: 2, n_kraus: 2 },
                sigma: StateSpec::Random { floor: 0.5 },
                kappa_sigma: None,
                kappa_nsigma: None,
                sqrt_mode: SqrtMode::ExactSupport,
            }),
            "pgm" => Experiment::Pgm(PgmParams {
                ensemble: EnsembleSpec::Random { n_states: 2, d: 2, pure: false, floor: 0.3 },
                pipeline: true,
            }),
            "search" => Experiment::Search(SearchParams { sizes: vec![2, 4, 8, 16], marked: None }),
            "sweep" => Experiment::Sweep(SweepParams {
                d_e: vec![1, 2, 4],
                kappa: vec![4.0, 8.0, 16.0],
                eps: Vec::new(),
                dim: 2,
                floor: 0.5,
            }),
            "bayes" => Experiment::Bayes(BayesSpec::Random { nx: 3, ny: 3 }),
            _ => return None,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Recover(_) => "recover",
            Experiment::Pgm(_) => "pgm",
            Experiment::Search(_) => "search",
            Experiment::Sweep(_) => "sweep",
            Experiment::Bayes(_) => "bayes",
        }
    }

    fn is_randomized(&self) -> bool {
        match self {
            Experiment::Recover(p) => p.channel.is_randomized() || p.sigma.is_randomized(),
            Experiment::Pgm(p) => matches!(p.ensemble, EnsembleSpec::Random { .. }),
            Experiment::Search(p) => p.marked.is_none(),
            Experiment::Sweep(_) => true,
            Experiment::Bayes(b) => matches!(b, BayesSpec::Random { .. }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpec {
    Random { d_in: usize, d_out: usize, n_kraus: usize },
    RandomUnitary { d: usize },
    Depolarizing { d: usize, p: f64 },
    AmplitudeDamping { gamma: f64 },
    Dephasing { p: f64 },
    /// Column-stochastic `p_y_given_x[y][x]`.
    Classical { p_y_given_x: Vec<Vec<f64>> },
    Explicit { channel: QuantumChannel },
    File { path: PathBuf },
}

impl ChannelSpec {
    fn is_randomized(&self) -> bool {
        matches!(self, ChannelSpec::Random { .. } | ChannelSpec::RandomUnitary { .. })
    }

    pub fn build(&self, rng: &mut InstanceRng) -> Result<QuantumChannel> {
        match self {
            ChannelSpec::Random { d_in, d_out, n_kraus } => {
                if *d_in == 0 || *d_out == 0 || *n_kraus == 0 || n_kraus * d_out < *d_in {
                    return Err(config_err(
                        "experiment.params.channel",
                        "need positive dimensions with n_kraus·d_out ≥ d_in",
                    ));
                }
                Ok(random::random_channel(*d_in, *d_out, *n_kraus, rng))
            }
            ChannelSpec::RandomUnitary { d } => {
                crate::channels::unitary_channel(&random::random_unitary(*d, rng))
            }
            ChannelSpec::Depolarizing { d, p } => depolarizing(*d, *p),
            ChannelSpec::AmplitudeDamping { gamma } => amplitude_damping(*gamma),
            ChannelSpec::Dephasing { p } => dephasing(*p),
            ChannelSpec::Classical { p_y_given_x } => classical_channel(p_y_given_x),
            ChannelSpec::Explicit { channel } => Ok(channel.clone()),
            ChannelSpec::File { path } => QuantumChannel::from_json(&read_file(path)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateSpec {
    /// Random full-rank state with minimum eigenvalue at least `floor / d`.
    Random { floor: f64 },
    MaximallyMixed,
    Diagonal { probs: Vec<f64> },
    Explicit { state: DensityMatrix },
}

impl StateSpec {
    fn is_randomized(&self) -> bool {
        matches!(self, StateSpec::Random { .. })
    }

    pub fn build(&self, dim: usize, rng: &mut InstanceRng) -> Result<DensityMatrix> {
        let s = match self {
            StateSpec::Random { floor } => {
                if !(0.0..=1.0).contains(floor) {
                    return Err(config_err("experiment.params.sigma.floor", "must lie in [0, 1]"));
                }
                random::random_state(dim, *floor, rng)
            }
            StateSpec::MaximallyMixed => DensityMatrix::maximally_mixed(dim),
            StateSpec::Diagonal { probs } => DensityMatrix::diagonal(probs)?,
            StateSpec::Explicit { state } => state.clone(),
        };
        if s.dim() != dim {
            return Err(config_err(
                "experiment.params.sigma",
                format!("state has dimension {}, channel input has {dim}", s.dim()),
            ));
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecoverParams {
    pub channel: ChannelSpec,
    pub sigma: StateSpec,
    /// Bounds default to the exact condition numbers.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_nsigma: Option<f64>,
    #[serde(default)]
    pub sqrt_mode: SqrtMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum EnsembleSpec {
    Random {
        n_states: usize,
        d: usize,
        #[serde(default)]
        pure: bool,
        #[serde(default)]
        floor: f64,
    },
    Explicit { ensemble: Ensemble },
    File { path: PathBuf },
}

impl EnsembleSpec {
    pub fn build(&self, rng: &mut InstanceRng) -> Result<Ensemble> {
        match self {
            EnsembleSpec::Random { n_states, d, pure, floor } => {
                if *n_states == 0 || *d == 0 {
                    return Err(config_err("experiment.params.ensemble", "need n_states, d ≥ 1"));
                }
                let probs = random::random_distribution(*n_states, 0.5, rng);
                let states = (0..*n_states)
                    .map(|_| {
                        if *pure {
                            DensityMatrix::pure(&random::random_pure_state(*d, rng))
                        } else {
                            Ok(random::random_state(*d, *floor, rng))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ensemble::unlabeled(renormalize(probs), states)
            }
            EnsembleSpec::Explicit { ensemble } => Ok(ensemble.clone()),
            EnsembleSpec::File { path } => Ensemble::from_json(&read_file(path)?),
        }
    }
}

/// Restores an exact unit sum after floating-point drift.
fn renormalize(mut p: Vec<f64>) -> Vec<f64> {
    let s: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= s);
    let head: f64 = p[..p.len() - 1].iter().sum();
    let last = p.len() - 1;
    p[last] = 1.0 - head;
    p
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PgmParams {
    pub ensemble: EnsembleSpec,
    /// Also run the approximate pipeline.
    #[serde(default = "yes")]
    pub pipeline: bool,
}

fn yes() -> bool {
    true
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchParams {
    pub sizes: Vec<usize>,
    /// 1-based marked element; drawn uniformly per size when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub marked: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepParams {
    pub d_e: Vec<usize>,
    /// Bounds on `κ_𝒩σ`; each instance is drawn until its exact value lies below the bound.
    pub kappa: Vec<f64>,
    /// Defaults to the top-level `eps`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eps: Vec<f64>,
    #[serde(default = "two")]
    pub dim: usize,
    #[serde(default = "half")]
    pub floor: f64,
}

fn two() -> usize {
    2
}

fn half() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum BayesSpec {
    Random { nx: usize, ny: usize },
    Explicit { prior: Vec<f64>, p_y_given_x: Vec<Vec<f64>> },
}

pub(crate) fn config_err(field: &str, detail: impl Into<String>) -> Error {
    Error::Config {
        field: field.to_string(),
        detail: detail.into(),
    }
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| config_err(&path.display().to_string(), e.to_string()))
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment, eps: f64, seed: Option<u64>) -> Self {
        Self {
            version: CONFIG_VERSION,
            seed,
            eps,
            repetitions: 1,
            output: None,
            record_timing: false,
            experiment,
        }
    }

    /// Parses and validates; syntax errors carry the JSON line and column.
    pub fn from_json(s: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(s).map_err(|e| {
            config_err(&format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&read_file(&path.to_path_buf())?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(config_err(
                "version",
                format!("unsupported version {}, expected {CONFIG_VERSION}", self.version),
            ));
        }
        check_eps("eps", self.eps)?;
        if self.repetitions == 0 {
            return Err(config_err("repetitions", "must be at least 1"));
        }
        if self.seed.is_none() && self.experiment.is_randomized() {
            return Err(config_err("seed", "required for randomized instances"));
        }
        match &self.experiment {
            Experiment::Search(p) => {
                if p.sizes.is_empty() || p.sizes.iter().any(|&n| n < 2) {
                    return Err(config_err("experiment.params.sizes", "need sizes ≥ 2"));
                }
                if let Some(m) = p.marked {
                    if m == 0 || p.sizes.iter().any(|&n| m > n) {
                        return Err(config_err(
                            "experiment.params.marked",
                            "must satisfy 1 ≤ marked ≤ every size",
                        ));
                    }
                }
            }
            Experiment::Sweep(p) => {
                if p.d_e.is_empty() || p.kappa.is_empty() {
                    return Err(config_err("experiment.params", "d_e and kappa must be non-empty"));
                }
                if p.d_e.iter().any(|&d| d == 0) || p.dim == 0 {
                    return Err(config_err("experiment.params.d_e", "dimensions must be positive"));
                }
                if p.kappa.iter().any(|&k| !(k >= p.dim as f64)) {
                    return Err(config_err(
                        "experiment.params.kappa",
                        "each bound must be at least dim",
                    ));
                }
                for &e in &p.eps {
                    check_eps("experiment.params.eps", e)?;
                }
                for &d_e in &p.d_e {
                    let t = 8 * d_e * d_e * p.dim;
                    if t > MAX_SWEEP_DIM {
                        return Err(config_err(
                            "experiment.params.d_e",
                            format!("register dimension {t} exceeds {MAX_SWEEP_DIM}"),
                        ));
                    }
                }
            }
            Experiment::Bayes(BayesSpec::Random { nx, ny }) => {
                if *nx == 0 || *ny == 0 {
                    return Err(config_err("experiment.params", "nx and ny must be positive"));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

fn check_eps(field: &str, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(config_err(field, format!("eps = {eps} is outside (0, 1)")));
    }
    Ok(())
}
