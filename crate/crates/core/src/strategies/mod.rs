//! Batch policies: each epoch a strategy commits all `N` stores to arms, then
//! observes the delayed outcome once the epoch closes.

mod ag1;
mod epsilon_greedy;
mod history;
mod thompson;
mod ucb1;

pub use ag1::{ag1_counts, ag1_plan};
pub use epsilon_greedy::epsilon_greedy_plan;
pub use history::{ArmAggregate, EpochRecord, ObservationHistory, Window};
pub use thompson::thompson_plan;
pub use ucb1::{ucb1_metric, ucb1_plan};

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::environment::{ArmId, AssignmentPlan, EpochOutcome};
use crate::error::{Error, Result};
use crate::metrics::estimate_mu;

pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_WINDOW_R: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    EpsilonGreedy,
    Ag1,
    Ucb1,
    Thompson,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::EpsilonGreedy,
        StrategyKind::Ag1,
        StrategyKind::Ucb1,
        StrategyKind::Thompson,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::EpsilonGreedy => "epsilon-greedy",
            StrategyKind::Ag1 => "ag1",
            StrategyKind::Ucb1 => "ucb1",
            StrategyKind::Thompson => "thompson",
        }
    }

    pub fn uses_epsilon(self) -> bool {
        matches!(self, StrategyKind::EpsilonGreedy | StrategyKind::Ag1)
    }

    pub fn default_window(self) -> Window {
        match self {
            StrategyKind::Ag1 => Window::Renewal(DEFAULT_WINDOW_R),
            _ => Window::Full,
        }
    }

    pub fn restartable(self) -> bool {
        matches!(self, StrategyKind::EpsilonGreedy | StrategyKind::Thompson)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::param("kind", format!("unknown strategy `{s}`")))
    }
}

/// Fully resolved strategy parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrategyConfig {
    pub kind: StrategyKind,
    /// Exploration share; only read by epsilon-greedy and AG1.
    pub epsilon: f64,
    pub window: Window,
    pub restart_period: Option<usize>,
}

impl StrategyConfig {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            epsilon: DEFAULT_EPSILON,
            window: kind.default_window(),
            restart_period: None,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = window;
        self
    }

    pub fn with_restart(mut self, period: usize) -> Self {
        self.restart_period = Some(period);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind.uses_epsilon() && !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::param(
                "epsilon",
                format!("must lie in (0, 1), got {}", self.epsilon),
            ));
        }
        if self.window == Window::Renewal(0) {
            return Err(Error::param("window_r", "must be >= 1"));
        }
        if let Some(p) = self.restart_period {
            if p == 0 {
                return Err(Error::param("restart_period", "must be >= 1"));
            }
            if !self.kind.restartable() {
                return Err(Error::param(
                    "restart_period",
                    format!("{} cannot be wrapped with restarts", self.kind),
                ));
            }
        }
        Ok(())
    }

    /// Short label: the kind name, with `*` for restart variants.
    pub fn label(&self) -> String {
        match self.restart_period {
            Some(_) => format!("{}*", self.kind),
            None => self.kind.to_string(),
        }
    }
}

/// One strategy's memory for a single run. Single owner; not shared.
#[derive(Debug, Clone)]
pub struct StrategyState {
    config: StrategyConfig,
    stores: usize,
    history: ObservationHistory,
}

impl StrategyState {
    pub fn new(config: StrategyConfig, arms: usize, stores: usize) -> Result<Self> {
        config.validate()?;
        if arms < 2 {
            return Err(Error::param(
                "K",
                format!("need at least 2 arms, got {arms}"),
            ));
        }
        if stores == 0 {
            return Err(Error::param("N", "need at least one store"));
        }
        Ok(Self {
            config,
            stores,
            history: ObservationHistory::new(arms),
        })
    }

    /// Adds a fixed restart schedule: at every epoch divisible by `period` all
    /// memory is dropped and that epoch is played round-robin.
    pub fn restart_wrap(mut self, period: usize) -> Result<Self> {
        self.config.restart_period = Some(period);
        self.config.validate()?;
        Ok(self)
    }

    pub fn config(&self) -> &StrategyConfig {
        &self.config
    }

    pub fn kind(&self) -> StrategyKind {
        self.config.kind
    }

    pub fn arms(&self) -> usize {
        self.history.arms()
    }

    pub fn stores(&self) -> usize {
        self.stores
    }

    pub fn history(&self) -> &ObservationHistory {
        &self.history
    }

    /// Windowed fill estimate of every arm as seen from `now`.
    pub fn estimates(&self, now: usize) -> Vec<Option<f64>> {
        (0..self.arms())
            .map(|k| estimate_mu(&self.history, ArmId(k), self.config.window, now))
            .collect()
    }

    /// Store assignments per arm inside the window, the `n(k)` of UCB1.
    pub fn play_counts(&self, now: usize) -> Vec<usize> {
        (0..self.arms())
            .map(|k| {
                self.history
                    .totals(ArmId(k), self.config.window, now)
                    .stores_assigned
            })
            .collect()
    }

    /// Item-level `(successes, failures)` inside the window.
    pub fn posterior_counts(&self, now: usize) -> Vec<(usize, usize)> {
        (0..self.arms())
            .map(|k| {
                let t = self.history.totals(ArmId(k), self.config.window, now);
                (t.items_filled, t.items_played - t.items_filled)
            })
            .collect()
    }

    fn reset(&mut self) {
        self.history.clear();
    }

    /// Commits the stores for `epoch`.
    pub fn plan<R: Rng + ?Sized>(&mut self, epoch: usize, rng: &mut R) -> AssignmentPlan {
        if let Some(period) = self.config.restart_period {
            if epoch.is_multiple_of(period) {
                self.reset();
                return AssignmentPlan::round_robin(epoch, self.stores, self.arms());
            }
        }
        match self.config.kind {
            StrategyKind::EpsilonGreedy => epsilon_greedy_plan(self, epoch, rng),
            StrategyKind::Ag1 => ag1_plan(self, epoch),
            StrategyKind::Ucb1 => ucb1_plan(self, epoch),
            StrategyKind::Thompson => thompson_plan(self, epoch, rng),
        }
    }

    /// Records a revealed epoch. Epochs must arrive in strictly increasing order.
    pub fn observe(&mut self, outcome: &EpochOutcome) -> Result<()> {
        if outcome.stores() != self.stores {
            return Err(Error::param(
                "outcome",
                format!("expected {} stores, got {}", self.stores, outcome.stores()),
            ));
        }
        if let Some(bad) = outcome
            .plan()
            .assignments()
            .iter()
            .find(|a| a.index() >= self.arms())
        {
            return Err(Error::param("outcome", format!("arm {bad} out of range")));
        }
        self.history
            .push(EpochRecord::from_outcome(outcome, self.arms()))?;
        if let Window::Renewal(r) = self.config.window {
            // keep {e - r + 1, ..., e}: exactly what planning e + 1 reads
            self.history
                .evict_before((outcome.epoch() + 1).saturating_sub(r));
        }
        Ok(())
    }
}

/// Lowest-index argmax over arms that have an estimate.
pub(crate) fn greedy_arm(estimates: &[Option<f64>]) -> Option<ArmId> {
    let mut best: Option<(usize, f64)> = None;
    for (k, e) in estimates.iter().enumerate() {
        if let Some(v) = *e {
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((k, v));
            }
        }
    }
    best.map(|(k, _)| ArmId(k))
}
