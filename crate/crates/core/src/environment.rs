//! Ground-truth reward processes and the delayed-feedback epoch protocol.
//!
//! Every epoch, each of `N` stores is committed to one arm and plays it for
//! `gamma` items. Item outcomes are i.i.d. Bernoulli draws with the arm's
//! expected reward at that epoch, and the whole `N x gamma` matrix is only
//! revealed once the epoch is over.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower bound of the interval stationary arm means are drawn from.
pub const STATIONARY_MU_LO: f64 = 0.70;
/// Upper bound of the interval stationary arm means are drawn from.
pub const STATIONARY_MU_HI: f64 = 0.95;

pub const DEFAULT_CENTER: f64 = 0.6;
pub const DEFAULT_AMPLITUDE: f64 = 0.3;
pub const DEFAULT_PERIOD: f64 = 50.0;
pub const DEFAULT_CLAMP: Clamp = Clamp { lo: 0.01, hi: 0.99 };

/// Index of an arm in `[0, K)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArmId(pub usize);

impl ArmId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for ArmId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Closed interval expected rewards are clamped into.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Clamp {
    pub lo: f64,
    pub hi: f64,
}

impl Clamp {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
            return Err(Error::param(
                "clamp",
                format!("need 0 <= lo < hi <= 1, got ({lo}, {hi})"),
            ));
        }
        Ok(Self { lo, hi })
    }

    fn apply(self, v: f64) -> f64 {
        v.clamp(self.lo, self.hi)
    }
}

impl Default for Clamp {
    fn default() -> Self {
        DEFAULT_CLAMP
    }
}

/// One arm's sinusoidal mean: `center + amplitude * sin(2 pi (t + phase) / period)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sinusoid {
    pub center: f64,
    pub amplitude: f64,
    /// In epochs.
    pub period: f64,
    /// In epochs.
    pub phase: f64,
}

impl Sinusoid {
    fn eval(&self, epoch: usize) -> f64 {
        self.center + self.amplitude * (2.0 * PI * (epoch as f64 + self.phase) / self.period).sin()
    }
}

/// Generative description of every arm's expected reward over time.
#[derive(Debug, Clone, PartialEq)]
pub enum RewardModel {
    Stationary { mu: Vec<f64> },
    Sinusoidal { params: Vec<Sinusoid>, clamp: Clamp },
}

fn check_arms(arms: usize) -> Result<()> {
    if arms < 2 {
        return Err(Error::param(
            "K",
            format!("need at least 2 arms, got {arms}"),
        ));
    }
    Ok(())
}

impl RewardModel {
    /// Builds a stationary model. Means not given are drawn i.i.d. from
    /// `Uniform(0.70, 0.95)`.
    pub fn stationary<R: Rng + ?Sized>(
        arms: usize,
        mu: Option<&[f64]>,
        rng: &mut R,
    ) -> Result<Self> {
        check_arms(arms)?;
        let mu = match mu {
            Some(mu) => {
                if mu.len() != arms {
                    return Err(Error::param(
                        "mu",
                        format!("expected {arms} values, got {}", mu.len()),
                    ));
                }
                if let Some(bad) = mu.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                    return Err(Error::param("mu", format!("{bad} is not a probability")));
                }
                mu.to_vec()
            }
            None => (0..arms)
                .map(|_| rng.random_range(STATIONARY_MU_LO..STATIONARY_MU_HI))
                .collect(),
        };
        Ok(RewardModel::Stationary { mu })
    }

    /// Builds a sinusoidal model. Without explicit parameters every arm gets
    /// center 0.6, amplitude 0.3, period 50 and phase `k * period / K`, so the
    /// lead passes from arm to arm over the horizon.
    pub fn sinusoidal(arms: usize, params: Option<Vec<Sinusoid>>, clamp: Clamp) -> Result<Self> {
        check_arms(arms)?;
        let clamp = Clamp::new(clamp.lo, clamp.hi)?;
        let params = match params {
            Some(p) => {
                if p.len() != arms {
                    return Err(Error::param(
                        "params",
                        format!("expected {arms} sinusoids, got {}", p.len()),
                    ));
                }
                for s in &p {
                    if !(s.period.is_finite() && s.period > 0.0) {
                        return Err(Error::param(
                            "period",
                            format!("must be > 0, got {}", s.period),
                        ));
                    }
                    if !(s.amplitude.is_finite() && s.amplitude >= 0.0) {
                        return Err(Error::param(
                            "amplitude",
                            format!("must be >= 0, got {}", s.amplitude),
                        ));
                    }
                    if !s.center.is_finite() || !s.phase.is_finite() {
                        return Err(Error::param("params", "center and phase must be finite"));
                    }
                }
                p
            }
            None => default_sinusoids(arms),
        };
        Ok(RewardModel::Sinusoidal { params, clamp })
    }

    pub fn arms(&self) -> usize {
        match self {
            RewardModel::Stationary { mu } => mu.len(),
            RewardModel::Sinusoidal { params, .. } => params.len(),
        }
    }

    pub fn is_stationary(&self) -> bool {
        matches!(self, RewardModel::Stationary { .. })
    }

    /// Expected reward of `arm` at `epoch`. Panics if `arm` is out of range.
    pub fn expected_reward(&self, arm: ArmId, epoch: usize) -> f64 {
        match self {
            RewardModel::Stationary { mu } => mu[arm.0],
            RewardModel::Sinusoidal { params, clamp } => clamp.apply(params[arm.0].eval(epoch)),
        }
    }

    pub fn expected_rewards(&self, epoch: usize) -> Vec<f64> {
        (0..self.arms())
            .map(|k| self.expected_reward(ArmId(k), epoch))
            .collect()
    }

    /// Best arm and its mean at `epoch`; ties go to the lowest index.
    pub fn optimal_arm(&self, epoch: usize) -> (ArmId, f64) {
        let mut best = (ArmId(0), self.expected_reward(ArmId(0), epoch));
        for k in 1..self.arms() {
            let v = self.expected_reward(ArmId(k), epoch);
            if v > best.1 {
                best = (ArmId(k), v);
            }
        }
        best
    }
}

pub fn default_sinusoids(arms: usize) -> Vec<Sinusoid> {
    (0..arms)
        .map(|k| Sinusoid {
            center: DEFAULT_CENTER,
            amplitude: DEFAULT_AMPLITUDE,
            period: DEFAULT_PERIOD,
            phase: k as f64 * DEFAULT_PERIOD / arms as f64,
        })
        .collect()
}

/// Store-to-arm commitment for one epoch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentPlan {
    epoch: usize,
    assignments: Vec<ArmId>,
}

impl AssignmentPlan {
    pub fn new(epoch: usize, assignments: Vec<ArmId>, arms: usize) -> Result<Self> {
        if let Some(bad) = assignments.iter().find(|a| a.0 >= arms) {
            return Err(Error::param(
                "assignments",
                format!("arm {bad} out of range for K = {arms}"),
            ));
        }
        Ok(Self { epoch, assignments })
    }

    /// Store `n` gets arm `n mod K`.
    pub fn round_robin(epoch: usize, stores: usize, arms: usize) -> Self {
        Self {
            epoch,
            assignments: (0..stores).map(|n| ArmId(n % arms)).collect(),
        }
    }

    /// Constructor for strategy code that already guarantees valid arms.
    pub(crate) fn from_valid(epoch: usize, assignments: Vec<ArmId>) -> Self {
        Self { epoch, assignments }
    }

    pub fn epoch(&self) -> usize {
        self.epoch
    }

    pub fn stores(&self) -> usize {
        self.assignments.len()
    }

    pub fn assignments(&self) -> &[ArmId] {
        &self.assignments
    }

    /// Number of stores assigned to each arm.
    pub fn counts(&self, arms: usize) -> Vec<usize> {
        let mut c = vec![0; arms];
        for a in &self.assignments {
            c[a.0] += 1;
        }
        c
    }
}

/// The `N x gamma` item results of one epoch, revealed after it ends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpochOutcome {
    plan: AssignmentPlan,
    gamma: usize,
    results: Vec<u8>,
}

impl EpochOutcome {
    /// Wraps a row-major `N x gamma` matrix of 0/1 outcomes.
    pub fn from_results(plan: AssignmentPlan, gamma: usize, results: Vec<u8>) -> Result<Self> {
        if gamma == 0 {
            return Err(Error::param("gamma", "must be >= 1"));
        }
        if results.len() != plan.stores() * gamma {
            return Err(Error::param(
                "results",
                format!(
                    "expected {} x {} entries, got {}",
                    plan.stores(),
                    gamma,
                    results.len()
                ),
            ));
        }
        if results.iter().any(|&r| r > 1) {
            return Err(Error::param("results", "entries must be 0 or 1"));
        }
        Ok(Self {
            plan,
            gamma,
            results,
        })
    }

    pub fn epoch(&self) -> usize {
        self.plan.epoch
    }

    pub fn plan(&self) -> &AssignmentPlan {
        &self.plan
    }

    pub fn gamma(&self) -> usize {
        self.gamma
    }

    pub fn stores(&self) -> usize {
        self.plan.stores()
    }

    pub fn row(&self, store: usize) -> &[u8] {
        &self.results[store * self.gamma..(store + 1) * self.gamma]
    }

    pub fn results(&self) -> &[u8] {
        &self.results
    }

    pub fn filled(&self) -> usize {
        self.results.iter().map(|&r| r as usize).sum()
    }
}

/// Plays one epoch: each store draws `gamma` Bernoulli items from its arm's
/// mean at the plan's epoch.
pub fn simulate_epoch<R: Rng + ?Sized>(
    model: &RewardModel,
    plan: &AssignmentPlan,
    gamma: usize,
    rng: &mut R,
) -> EpochOutcome {
    assert!(gamma >= 1, "gamma must be >= 1");
    let mu = model.expected_rewards(plan.epoch);
    let mut results = Vec::with_capacity(plan.stores() * gamma);
    for arm in &plan.assignments {
        let p = mu[arm.0];
        results.extend((0..gamma).map(|_| u8::from(rng.random_bool(p))));
    }
    EpochOutcome {
        plan: plan.clone(),
        gamma,
        results,
    }
}
