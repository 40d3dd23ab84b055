//! JSON experiment configuration.
//!
//! ```json
//! {
//!   "name": "stationary",                       // required
//!   "N": 50, "K": 10, "gamma": 50, "T": 100,
//!   "reward_model": {"kind": "stationary", "mu": [0.8, 0.9]},   // required
//!   "strategies": [{"kind": "epsilon-greedy", "epsilon": 0.1, "window_r": 3,
//!                   "restart_period": 3, "label": "eps*"}],
//!   "replications": 100, "base_seed": 0, "output_dir": "out"
//! }
//! ```
//!
//! A sinusoidal model is `{"kind": "sinusoidal", "params": [{"center": 0.6,
//! "amplitude": 0.3, "period": 50, "phase": 0}, ...], "clamp": [0.01, 0.99]}`,
//! both fields optional. Unknown keys anywhere are rejected.

use std::collections::HashSet;
use std::path::PathBuf;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::environment::{Clamp, RewardModel, Sinusoid};
use crate::error::{Error, Result};
use crate::strategies::{StrategyConfig, StrategyKind, Window, DEFAULT_EPSILON, DEFAULT_WINDOW_R};

pub const DEFAULT_STORES: usize = 50;
pub const DEFAULT_ARMS: usize = 10;
pub const DEFAULT_GAMMA: usize = 50;
pub const DEFAULT_EPOCHS: usize = 100;
pub const DEFAULT_REPLICATIONS: usize = 100;
pub const DEFAULT_OUTPUT_DIR: &str = "out";

#[derive(Debug, Clone, PartialEq)]
pub enum RewardModelSpec {
    /// `mu: None` redraws the means for every replication.
    Stationary { mu: Option<Vec<f64>> },
    /// Fixed across replications.
    Sinusoidal { model: RewardModel },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrategySpec {
    pub label: String,
    pub config: StrategyConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub name: String,
    pub stores: usize,
    pub arms: usize,
    pub gamma: usize,
    pub epochs: usize,
    pub reward_model: RewardModelSpec,
    pub strategies: Vec<StrategySpec>,
    pub replications: usize,
    pub base_seed: u64,
    pub output_dir: PathBuf,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    name: Option<String>,
    #[serde(rename = "N")]
    stores: Option<usize>,
    #[serde(rename = "K")]
    arms: Option<usize>,
    gamma: Option<usize>,
    #[serde(rename = "T")]
    epochs: Option<usize>,
    reward_model: Option<RawRewardModel>,
    strategies: Option<Vec<RawStrategy>>,
    replications: Option<usize>,
    base_seed: Option<u64>,
    output_dir: Option<PathBuf>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawRewardModel {
    Stationary {
        mu: Option<Vec<f64>>,
    },
    Sinusoidal {
        params: Option<Vec<Sinusoid>>,
        clamp: Option<(f64, f64)>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStrategy {
    kind: StrategyKind,
    epsilon: Option<f64>,
    window_r: Option<usize>,
    restart_period: Option<usize>,
    label: Option<String>,
}

fn default_strategies(stationary: bool) -> Vec<StrategyConfig> {
    if stationary {
        vec![
            StrategyConfig::new(StrategyKind::EpsilonGreedy),
            StrategyConfig::new(StrategyKind::Thompson),
            StrategyConfig::new(StrategyKind::Ucb1),
        ]
    } else {
        vec![
            StrategyConfig::new(StrategyKind::EpsilonGreedy).with_restart(DEFAULT_WINDOW_R),
            StrategyConfig::new(StrategyKind::Thompson).with_restart(DEFAULT_WINDOW_R),
            StrategyConfig::new(StrategyKind::Ag1),
        ]
    }
}

fn param_to_config(prefix: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => {
            Error::config(format!("{prefix}{name}"), reason)
        }
        other => other,
    }
}

/// Parses and validates a JSON config, filling every omitted field with its default.
pub fn load_config(source: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(source);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let key = if path == "." {
            "<root>".to_string()
        } else {
            path
        };
        Error::config(key, e.into_inner().to_string())
    })?;

    let stores = raw.stores.unwrap_or(DEFAULT_STORES);
    let arms = raw.arms.unwrap_or(DEFAULT_ARMS);
    let gamma = raw.gamma.unwrap_or(DEFAULT_GAMMA);
    let epochs = raw.epochs.unwrap_or(DEFAULT_EPOCHS);
    let replications = raw.replications.unwrap_or(DEFAULT_REPLICATIONS);
    if arms < 2 {
        return Err(Error::config("K", format!("must be >= 2, got {arms}")));
    }
    if stores < arms {
        return Err(Error::config(
            "N",
            format!("must be >= K ({arms}), got {stores}"),
        ));
    }
    if gamma < 1 {
        return Err(Error::config("gamma", "must be >= 1"));
    }
    if epochs < 1 {
        return Err(Error::config("T", "must be >= 1"));
    }
    if replications < 1 {
        return Err(Error::config("replications", "must be >= 1"));
    }

    let name = raw
        .name
        .ok_or_else(|| Error::config("name", "missing required field"))?;
    if name.is_empty() || name.contains(['/', '\\']) {
        return Err(Error::config(
            "name",
            "must be a non-empty file-name-safe string",
        ));
    }

    let reward_model = match raw
        .reward_model
        .ok_or_else(|| Error::config("reward_model", "missing required field"))?
    {
        RawRewardModel::Stationary { mu } => {
            if let Some(mu) = &mu {
                // validate now; the model itself is rebuilt per replication
                let mut unused = ChaCha8Rng::seed_from_u64(0);
                RewardModel::stationary(arms, Some(mu), &mut unused)
                    .map_err(|e| param_to_config("reward_model.", e))?;
            }
            RewardModelSpec::Stationary { mu }
        }
        RawRewardModel::Sinusoidal { params, clamp } => {
            let clamp = match clamp {
                Some((lo, hi)) => {
                    Clamp::new(lo, hi).map_err(|e| param_to_config("reward_model.", e))?
                }
                None => Clamp::default(),
            };
            let model = RewardModel::sinusoidal(arms, params, clamp)
                .map_err(|e| param_to_config("reward_model.", e))?;
            RewardModelSpec::Sinusoidal { model }
        }
    };
    let stationary = matches!(reward_model, RewardModelSpec::Stationary { .. });

    let strategies = match raw.strategies {
        None => default_strategies(stationary)
            .into_iter()
            .map(|config| StrategySpec {
                label: config.label(),
                config,
            })
            .collect(),
        Some(list) => {
            if list.is_empty() {
                return Err(Error::config(
                    "strategies",
                    "must list at least one strategy",
                ));
            }
            let mut specs = Vec::with_capacity(list.len());
            let mut seen = HashSet::new();
            for (i, s) in list.into_iter().enumerate() {
                let prefix = format!("strategies[{i}].");
                let mut config =
                    StrategyConfig::new(s.kind).with_epsilon(s.epsilon.unwrap_or(DEFAULT_EPSILON));
                if let Some(r) = s.window_r {
                    config = config.with_window(Window::Renewal(r));
                }
                if let Some(p) = s.restart_period {
                    config = config.with_restart(p);
                }
                config.validate().map_err(|e| param_to_config(&prefix, e))?;
                let label = s.label.unwrap_or_else(|| config.label());
                if label.is_empty() || !seen.insert(label.clone()) {
                    return Err(Error::config(
                        format!("{prefix}label"),
                        format!("strategy label `{label}` must be unique and non-empty"),
                    ));
                }
                specs.push(StrategySpec { label, config });
            }
            specs
        }
    };

    Ok(ExperimentConfig {
        name,
        stores,
        arms,
        gamma,
        epochs,
        reward_model,
        strategies,
        replications,
        base_seed: raw.base_seed.unwrap_or(0),
        output_dir: raw
            .output_dir
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR)),
    })
}
