//! Simulator for batched, delayed-feedback multi-armed bandits.
//!
//! Each epoch `N` stores are committed to arms, every store plays its arm for
//! `gamma` Bernoulli items, and the results only arrive when the epoch ends.
//! Rewards are either stationary or sinusoidal in time. Strategies:
//! epsilon-greedy, AG1 (windowed adaptive greedy with a fixed exploration
//! budget), UCB1 and Thompson sampling, plus fixed-schedule restart variants.

pub mod cli;
pub mod environment;
pub mod error;
pub mod harness;
pub mod metrics;
pub mod strategies;

pub use environment::{
    simulate_epoch, ArmId, AssignmentPlan, Clamp, EpochOutcome, RewardModel, Sinusoid,
};
pub use error::{Error, Result};
pub use strategies::{StrategyConfig, StrategyKind, StrategyState, Window};
