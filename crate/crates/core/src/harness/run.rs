use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::config::{ExperimentConfig, RewardModelSpec, StrategySpec};
use crate::environment::{simulate_epoch, ArmId, RewardModel};
use crate::error::{Error, Result};
use crate::metrics::{cumulative_series, epoch_realized_metrics};
use crate::strategies::StrategyState;

/// Strategy slot used when deriving the per-replication reward-model seed.
const MODEL_STREAM: u64 = u64::MAX;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the random stream owned by one (strategy, replication) job:
/// `splitmix64(splitmix64(splitmix64(base) ^ strategy) ^ replication)`.
///
/// The reward model of replication `r` uses `child_seed(base, u64::MAX, r)`,
/// so every strategy of that replication faces the same model.
pub fn child_seed(base_seed: u64, strategy: u64, replication: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(base_seed) ^ strategy) ^ replication)
}

/// How the (strategy, replication) jobs are scheduled. Output is identical
/// either way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// One epoch of one (strategy, replication) run, flattened for CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: String,
    pub strategy: String,
    pub replication: usize,
    pub epoch: usize,
    pub optimal_arm: ArmId,
    pub mu_star: f64,
    pub realized_reward: f64,
    pub pseudo_regret: f64,
    pub realized_regret: f64,
    pub cum_reward: f64,
    pub cum_pseudo_regret: f64,
    pub cum_realized_regret: f64,
    pub counts: Vec<usize>,
}

/// Reward model faced by every strategy in `replication`.
pub fn replication_model(config: &ExperimentConfig, replication: usize) -> Result<RewardModel> {
    match &config.reward_model {
        RewardModelSpec::Stationary { mu } => {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(
                config.base_seed,
                MODEL_STREAM,
                replication as u64,
            ));
            RewardModel::stationary(config.arms, mu.as_deref(), &mut rng)
        }
        RewardModelSpec::Sinusoidal { model } => Ok(model.clone()),
    }
}

/// Plays one strategy through all epochs of one replication.
pub fn run_single(
    config: &ExperimentConfig,
    strategy_index: usize,
    replication: usize,
) -> Result<Vec<RunRecord>> {
    let spec: &StrategySpec = &config.strategies[strategy_index];
    let context = || format!("strategy `{}` replication {replication}", spec.label);
    let wrap = |e: Error| Error::Run {
        context: context(),
        source: Box::new(e),
    };
    let model = replication_model(config, replication).map_err(wrap)?;
    let seed = child_seed(config.base_seed, strategy_index as u64, replication as u64);
    let mut policy_rng = ChaCha8Rng::seed_from_u64(seed);
    policy_rng.set_stream(0);
    let mut env_rng = ChaCha8Rng::seed_from_u64(seed);
    env_rng.set_stream(1);

    let mut state = StrategyState::new(spec.config, config.arms, config.stores).map_err(wrap)?;
    let mut metrics = Vec::with_capacity(config.epochs);
    for epoch in 0..config.epochs {
        let plan = state.plan(epoch, &mut policy_rng);
        let outcome = simulate_epoch(&model, &plan, config.gamma, &mut env_rng);
        metrics.push(epoch_realized_metrics(&model, &outcome));
        state.observe(&outcome).map_err(wrap)?;
    }
    let cum = cumulative_series(&metrics).map_err(wrap)?;
    let run_id = format!("{}:{}:{replication}", config.name, spec.label);
    Ok(metrics
        .into_iter()
        .enumerate()
        .map(|(i, m)| RunRecord {
            run_id: run_id.clone(),
            strategy: spec.label.clone(),
            replication,
            epoch: m.epoch,
            optimal_arm: m.optimal_arm,
            mu_star: m.mu_star,
            realized_reward: m.realized_reward,
            pseudo_regret: m.pseudo_regret,
            realized_regret: m.realized_regret,
            cum_reward: cum.reward[i],
            cum_pseudo_regret: cum.pseudo_regret[i],
            cum_realized_regret: cum.realized_regret[i],
            counts: m.counts,
        })
        .collect())
}

/// Runs every (strategy, replication) pair with the default execution mode.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    run_experiment_with(config, Execution::default())
}

/// Records come back ordered by (strategy in config order, replication, epoch).
pub fn run_experiment_with(
    config: &ExperimentConfig,
    execution: Execution,
) -> Result<Vec<RunRecord>> {
    let jobs: Vec<(usize, usize)> = (0..config.strategies.len())
        .flat_map(|s| (0..config.replications).map(move |r| (s, r)))
        .collect();
    let runs: Vec<Result<Vec<RunRecord>>> = match execution {
        Execution::Sequential => jobs
            .iter()
            .map(|&(s, r)| run_single(config, s, r))
            .collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => jobs
            .par_iter()
            .map(|&(s, r)| run_single(config, s, r))
            .collect(),
    };
    let mut records = Vec::with_capacity(jobs.len() * config.epochs);
    for run in runs {
        records.extend(run?);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::load_config;

    fn small(extra: &str) -> ExperimentConfig {
        load_config(&format!(
            r#"{{"name":"t","N":12,"K":3,"gamma":5,"T":100,"replications":2,"base_seed":9,
                "reward_model":{{"kind":"stationary"}},
                "strategies":[{{"kind":"epsilon-greedy"}},{{"kind":"thompson"}}]{extra}}}"#
        ))
        .unwrap()
    }

    #[test]
    fn grid_size() {
        let recs = run_experiment(&small("")).unwrap();
        assert_eq!(recs.len(), 400);
    }

    #[test]
    fn reruns_are_identical() {
        let c = small("");
        assert_eq!(run_experiment(&c).unwrap(), run_experiment(&c).unwrap());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_matches_sequential() {
        let c = small("");
        assert_eq!(
            run_experiment_with(&c, Execution::Parallel).unwrap(),
            run_experiment_with(&c, Execution::Sequential).unwrap()
        );
    }

    #[test]
    fn strategies_share_the_model_of_a_replication() {
        let recs = run_experiment(&small("")).unwrap();
        for r in recs.iter().filter(|r| r.strategy == "thompson") {
            let twin = recs
                .iter()
                .find(|o| {
                    o.strategy == "epsilon-greedy"
                        && o.replication == r.replication
                        && o.epoch == r.epoch
                })
                .unwrap();
            assert_eq!(twin.mu_star, r.mu_star);
            assert_eq!(twin.optimal_arm, r.optimal_arm);
        }
        let m0 = replication_model(&small(""), 0).unwrap();
        let m1 = replication_model(&small(""), 1).unwrap();
        assert_ne!(m0, m1);
    }

    #[test]
    fn streams_do_not_leak_between_strategies() {
        // changing strategy 0 must leave strategy 1's run untouched
        let a = small("");
        let mut b = a.clone();
        b.strategies[0].config.epsilon = 0.5;
        let pick = |recs: Vec<RunRecord>| -> Vec<RunRecord> {
            recs.into_iter()
                .filter(|r| r.strategy == "thompson")
                .collect()
        };
        assert_eq!(
            pick(run_experiment(&a).unwrap()),
            pick(run_experiment(&b).unwrap())
        );
    }

    #[test]
    fn child_seeds_differ_across_coordinates() {
        let mut seen = std::collections::HashSet::new();
        for s in 0..10 {
            for r in 0..100 {
                assert!(seen.insert(child_seed(42, s, r)));
            }
        }
        assert_ne!(child_seed(1, 0, 0), child_seed(2, 0, 0));
    }
}
