use rand::Rng;

use super::{greedy_arm, StrategyState};
use crate::environment::{ArmId, AssignmentPlan};

/// Each store independently takes the greedy arm with probability `1 - eps`,
/// otherwise one of the other `K - 1` arms uniformly (`eps / (K - 1)` each).
/// Round-robin when no arm has an estimate yet.
pub fn epsilon_greedy_plan<R: Rng + ?Sized>(
    state: &StrategyState,
    epoch: usize,
    rng: &mut R,
) -> AssignmentPlan {
    let arms = state.arms();
    let Some(greedy) = greedy_arm(&state.estimates(epoch)) else {
        return AssignmentPlan::round_robin(epoch, state.stores(), arms);
    };
    let eps = state.config().epsilon;
    let assignments = (0..state.stores())
        .map(|_| {
            if rng.random::<f64>() < eps {
                let k = rng.random_range(0..arms - 1);
                ArmId(if k >= greedy.index() { k + 1 } else { k })
            } else {
                greedy
            }
        })
        .collect();
    AssignmentPlan::from_valid(epoch, assignments)
}
