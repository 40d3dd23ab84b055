use super::{greedy_arm, StrategyState};
use crate::environment::{ArmId, AssignmentPlan};
use crate::error::{Error, Result};

/// Store counts for one AG1 epoch.
///
/// Element 0 is the greedy arm with `floor(N (1 - eps))` stores. Elements
/// `1..K` are the non-greedy arms in cyclic order after the greedy arm; the
/// remaining stores are dealt to them round-robin, so they differ by at most
/// one and the total is exactly `N`.
pub fn ag1_counts(stores: usize, epsilon: f64, arms: usize) -> Result<Vec<usize>> {
    if arms < 2 {
        return Err(Error::param(
            "K",
            format!("need at least 2 arms, got {arms}"),
        ));
    }
    if stores < arms {
        return Err(Error::param(
            "N",
            format!("need at least as many stores as arms ({stores} < {arms})"),
        ));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::param(
            "epsilon",
            format!("{epsilon} is not a probability"),
        ));
    }
    // the nudge keeps decimal epsilons like 0.3 from flooring 7.0 down to 6
    let greedy = (((stores as f64) * (1.0 - epsilon) + 1e-9).floor() as usize).min(stores);
    let rest = stores - greedy;
    let others = arms - 1;
    let mut counts = Vec::with_capacity(arms);
    counts.push(greedy);
    counts.extend((0..others).map(|i| rest / others + usize::from(i < rest % others)));
    Ok(counts)
}

/// Greedy on the renewal-window estimates with a fixed store budget per arm.
///
/// Stores `0..n*` go to the greedy arm. The rest are dealt over the non-greedy
/// arms; the dealing continues where the previous epoch stopped, so when the
/// remainder is smaller than `K - 1` every arm is still visited within a few
/// epochs. Deterministic: AG1 draws no random numbers.
pub fn ag1_plan(state: &StrategyState, epoch: usize) -> AssignmentPlan {
    let arms = state.arms();
    let stores = state.stores();
    let Some(greedy) = greedy_arm(&state.estimates(epoch)) else {
        return AssignmentPlan::round_robin(epoch, stores, arms);
    };
    let counts = match ag1_counts(stores, state.config().epsilon, arms) {
        Ok(c) => c,
        // fewer stores than arms: no budget for forced exploration
        Err(_) => return AssignmentPlan::from_valid(epoch, vec![greedy; stores]),
    };
    let others = arms - 1;
    let rest = stores - counts[0];
    let offset = (epoch * rest) % others;
    let mut assignments = vec![greedy; counts[0]];
    assignments.extend((0..rest).map(|j| {
        let pos = (offset + j) % others;
        ArmId((greedy.index() + 1 + pos) % arms)
    }));
    AssignmentPlan::from_valid(epoch, assignments)
}
