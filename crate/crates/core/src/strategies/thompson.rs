use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::StrategyState;
use crate::environment::{ArmId, AssignmentPlan};

/// Probability matching by posterior sampling.
///
/// Every arm carries a `Beta(1 + successes, 1 + failures)` posterior over its
/// item fill rate. Each store draws a fresh sample from every posterior and
/// takes the arm with the largest draw.
pub fn thompson_plan<R: Rng + ?Sized>(
    state: &StrategyState,
    epoch: usize,
    rng: &mut R,
) -> AssignmentPlan {
    let posteriors: Vec<Beta<f64>> = state
        .posterior_counts(epoch)
        .into_iter()
        .map(|(s, f)| Beta::new(1.0 + s as f64, 1.0 + f as f64).expect("beta parameters are >= 1"))
        .collect();
    let assignments = (0..state.stores())
        .map(|_| {
            let mut best = 0;
            let mut best_draw = f64::NEG_INFINITY;
            for (k, post) in posteriors.iter().enumerate() {
                let d = post.sample(rng);
                if d > best_draw {
                    best = k;
                    best_draw = d;
                }
            }
            ArmId(best)
        })
        .collect();
    AssignmentPlan::from_valid(epoch, assignments)
}
