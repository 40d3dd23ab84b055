//! Estimation and regret accounting.

use std::f64::consts::PI;

use crate::environment::{ArmId, AssignmentPlan, EpochOutcome, RewardModel};
use crate::error::{Error, Result};
use crate::strategies::{ObservationHistory, Window};

/// Fraction of items filled by `arm` over `window` as seen from epoch `now`,
/// normalized by the items that arm actually played. `None` if it played none.
pub fn estimate_mu(
    history: &ObservationHistory,
    arm: ArmId,
    window: Window,
    now: usize,
) -> Option<f64> {
    let t = history.totals(arm, window, now);
    (t.items_played > 0).then(|| t.items_filled as f64 / t.items_played as f64)
}

/// Expected per-item fill rate of `plan` at its epoch.
pub fn policy_value(model: &RewardModel, plan: &AssignmentPlan) -> f64 {
    let n = plan.stores() as f64;
    plan.counts(model.arms())
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 / n * model.expected_reward(ArmId(k), plan.epoch()))
        .sum()
}

/// `mu*_t - policy_value`, accumulated arm by arm so it is never negative.
pub fn epoch_pseudo_regret(model: &RewardModel, plan: &AssignmentPlan) -> f64 {
    let (_, mu_star) = model.optimal_arm(plan.epoch());
    let n = plan.stores() as f64;
    plan.counts(model.arms())
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 / n * (mu_star - model.expected_reward(ArmId(k), plan.epoch())))
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub optimal_arm: ArmId,
    pub mu_star: f64,
    /// Observed fill fraction over all `N * gamma` items.
    pub realized_reward: f64,
    pub pseudo_regret: f64,
    /// `mu_star - realized_reward`; negative when the epoch got lucky.
    pub realized_regret: f64,
    pub counts: Vec<usize>,
}

pub fn epoch_realized_metrics(model: &RewardModel, outcome: &EpochOutcome) -> EpochMetrics {
    let epoch = outcome.epoch();
    let (optimal_arm, mu_star) = model.optimal_arm(epoch);
    let realized_reward = outcome.filled() as f64 / outcome.results().len() as f64;
    EpochMetrics {
        epoch,
        optimal_arm,
        mu_star,
        realized_reward,
        pseudo_regret: epoch_pseudo_regret(model, outcome.plan()),
        realized_regret: mu_star - realized_reward,
        counts: outcome.plan().counts(model.arms()),
    }
}

/// Running sums over an epoch-ordered run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CumulativeSeries {
    pub reward: Vec<f64>,
    pub pseudo_regret: Vec<f64>,
    pub realized_regret: Vec<f64>,
}

pub fn cumulative_series(metrics: &[EpochMetrics]) -> Result<CumulativeSeries> {
    if let Some(w) = metrics.windows(2).find(|w| w[1].epoch <= w[0].epoch) {
        return Err(Error::param(
            "metrics",
            format!("epochs out of order: {} then {}", w[0].epoch, w[1].epoch),
        ));
    }
    let mut out = CumulativeSeries::default();
    let (mut rw, mut pr, mut rr) = (0.0, 0.0, 0.0);
    for m in metrics {
        rw += m.realized_reward;
        pr += m.pseudo_regret;
        rr += m.realized_regret;
        out.reward.push(rw);
        out.pseudo_regret.push(pr);
        out.realized_regret.push(rr);
    }
    Ok(out)
}

/// Reference value of the classic UCB1 regret expression
/// `8 * sum_{gap > 0} ln n(k) / gap_k + (1 + pi^2 / 3) * sum_k gap_k`
/// with `gap_k = mu* - mu_k`. Counts below 1 contribute no log term.
/// Only defined for stationary models; carries no claim about simulated runs.
pub fn ucb1_bound_diagnostic(model: &RewardModel, play_counts: &[f64]) -> Result<f64> {
    let RewardModel::Stationary { mu } = model else {
        return Err(Error::param(
            "model",
            "bound is only defined for stationary rewards",
        ));
    };
    if play_counts.len() != mu.len() {
        return Err(Error::param(
            "play_counts",
            format!("expected {} counts, got {}", mu.len(), play_counts.len()),
        ));
    }
    let mu_star = mu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut log_term = 0.0;
    let mut gap_sum = 0.0;
    for (&m, &n) in mu.iter().zip(play_counts) {
        let gap = mu_star - m;
        if gap > 0.0 {
            log_term += n.max(1.0).ln() / gap;
        }
        gap_sum += gap;
    }
    Ok(8.0 * log_term + (1.0 + PI * PI / 3.0) * gap_sum)
}
