use super::StrategyState;
use crate::environment::{ArmId, AssignmentPlan};

/// `mu_hat + sqrt(2 ln t / n_k)`, or `+inf` for an arm never assigned.
pub fn ucb1_metric(mu_hat: f64, t: usize, n_k: usize) -> f64 {
    if n_k == 0 {
        return f64::INFINITY;
    }
    mu_hat + (2.0 * (t.max(1) as f64).ln() / n_k as f64).sqrt()
}

/// Assigns stores one at a time to the arm with the largest UCB1 metric.
///
/// Estimates stay frozen for the whole epoch (nothing is revealed mid-epoch)
/// while `n(k)` grows by one per store handed to arm `k`. `t` is `epoch + 1`.
/// Ties go to the arm with fewer assignments, then the lower index; an arm
/// with no estimate counts as `0.0` once it has been assigned.
pub fn ucb1_plan(state: &StrategyState, epoch: usize) -> AssignmentPlan {
    let estimates: Vec<f64> = state
        .estimates(epoch)
        .into_iter()
        .map(|e| e.unwrap_or(0.0))
        .collect();
    let mut counts = state.play_counts(epoch);
    let t = epoch + 1;
    let mut assignments = Vec::with_capacity(state.stores());
    for _ in 0..state.stores() {
        let mut best = 0;
        let mut best_m = ucb1_metric(estimates[0], t, counts[0]);
        for k in 1..counts.len() {
            let m = ucb1_metric(estimates[k], t, counts[k]);
            if m > best_m || (m == best_m && counts[k] < counts[best]) {
                best = k;
                best_m = m;
            }
        }
        counts[best] += 1;
        assignments.push(ArmId(best));
    }
    AssignmentPlan::from_valid(epoch, assignments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::EpochOutcome;
    use crate::strategies::{StrategyConfig, StrategyKind};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn state(arms: usize, stores: usize) -> StrategyState {
        StrategyState::new(StrategyConfig::new(StrategyKind::Ucb1), arms, stores).unwrap()
    }

    #[test]
    fn metric_examples() {
        assert_abs_diff_eq!(ucb1_metric(0.5, 100, 10), 1.45971, epsilon = 1e-5);
        assert_eq!(ucb1_metric(0.9, 1, 5), 0.9);
        assert_eq!(ucb1_metric(0.2, 17, 0), f64::INFINITY);
    }

    #[test]
    fn first_epoch_is_spread_evenly() {
        let p = ucb1_plan(&state(10, 50), 0);
        assert_eq!(p.counts(10), vec![5; 10]);
        assert_eq!(
            &p.assignments()[..10],
            &(0..10).map(ArmId).collect::<Vec<_>>()[..]
        );
    }

    #[test]
    fn symmetric_tie_goes_to_arm_zero() {
        assert_eq!(ucb1_plan(&state(2, 3), 0).assignments()[0], ArmId(0));
    }

    /// Independent re-trace of the sequential rule: brute-force recompute all
    /// metrics from scratch for every store.
    fn oracle_trace(mu: &[f64], n0: &[usize], t: usize, stores: usize) -> Vec<usize> {
        let mut assigned = vec![0usize; mu.len()];
        let mut out = Vec::new();
        for _ in 0..stores {
            let scored: Vec<(f64, usize, usize)> = (0..mu.len())
                .map(|k| {
                    let n = n0[k] + assigned[k];
                    let m = if n == 0 {
                        f64::INFINITY
                    } else {
                        mu[k] + (2.0 * (t as f64).ln() / n as f64).sqrt()
                    };
                    (m, n, k)
                })
                .collect();
            let pick = scored
                .iter()
                .max_by(|a, b| {
                    a.0.partial_cmp(&b.0)
                        .unwrap()
                        .then(b.1.cmp(&a.1))
                        .then(b.2.cmp(&a.2))
                })
                .unwrap()
                .2;
            assigned[pick] += 1;
            out.push(pick);
        }
        out
    }

    #[test]
    fn dominant_arm_still_loses_stores_to_exploration() {
        // epoch 0 gives arm 0 a perfect record from 40 stores, the others 2 each at 50%
        let mut s = state(3, 44);
        let mut arms = vec![ArmId(0); 40];
        arms.extend([ArmId(1), ArmId(1), ArmId(2), ArmId(2)]);
        let plan = AssignmentPlan::new(0, arms, 3).unwrap();
        let mut results = vec![1u8; 40 * 2];
        results.extend([1, 0, 1, 0, 1, 0, 1, 0]);
        s.observe(&EpochOutcome::from_results(plan, 2, results).unwrap())
            .unwrap();

        let p = ucb1_plan(&s, 9);
        let expected = oracle_trace(&[1.0, 0.5, 0.5], &[40, 2, 2], 10, 44);
        let got: Vec<usize> = p.assignments().iter().map(|a| a.index()).collect();
        assert_eq!(got, expected);
        let c = p.counts(3);
        assert!(c[1] > 0 && c[2] > 0, "{c:?}");
        assert!(c[0] > 0);
    }

    proptest! {
        #[test]
        fn metric_decreases_in_n_and_grows_in_t(mu in 0.0f64..1.0, t in 2usize..10_000, n in 1usize..10_000) {
            prop_assert!(ucb1_metric(mu, t, n + 1) < ucb1_metric(mu, t, n));
            prop_assert!(ucb1_metric(mu, t + 1, n) >= ucb1_metric(mu, t, n));
        }

        #[test]
        fn plan_matches_oracle_trace(
            mu in proptest::collection::vec(0.0f64..1.0, 2..6),
            n0 in proptest::collection::vec(1usize..30, 6),
            epoch in 1usize..200,
        ) {
            // one observed epoch reproducing n0 and (rounded) mu exactly
            let arms = mu.len();
            let gamma = 1000;
            let mut assignments = Vec::new();
            let mut results = Vec::new();
            let mut mu_exact = Vec::new();
            for k in 0..arms {
                let filled = (mu[k] * gamma as f64).round() as usize;
                mu_exact.push(filled as f64 / gamma as f64);
                for _ in 0..n0[k] {
                    assignments.push(ArmId(k));
                    results.extend((0..gamma).map(|i| u8::from(i < filled)));
                }
            }
            let stores = assignments.len();
            let mut s = state(arms, stores);
            let plan = AssignmentPlan::new(0, assignments, arms).unwrap();
            s.observe(&EpochOutcome::from_results(plan, gamma, results).unwrap()).unwrap();

            let got: Vec<usize> = ucb1_plan(&s, epoch).assignments().iter().map(|a| a.index()).collect();
            prop_assert_eq!(got, oracle_trace(&mu_exact, &n0[..arms], epoch + 1, stores));
        }
    }
}
