use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::run::RunRecord;
use crate::error::{Error, Result};

/// Final-epoch statistics of one strategy across replications.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategySummary {
    pub strategy: String,
    pub replications: usize,
    pub mean_regret: f64,
    pub median_regret: f64,
    pub mean_reward: f64,
    pub median_reward: f64,
}

/// Rows ordered by ascending median cumulative realized regret.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub rows: Vec<StrategySummary>,
}

pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Final `(cum_realized_regret, cum_reward)` of every replication, per
/// strategy, ordered by replication. Fails unless every strategy has the same
/// replications and every run covers epochs `0..T` exactly once.
pub fn final_values(records: &[RunRecord]) -> Result<BTreeMap<String, Vec<(f64, f64)>>> {
    let mut runs: BTreeMap<&str, BTreeMap<usize, Vec<&RunRecord>>> = BTreeMap::new();
    for r in records {
        runs.entry(&r.strategy)
            .or_default()
            .entry(r.replication)
            .or_default()
            .push(r);
    }
    let mut reps_ref: Option<BTreeSet<usize>> = None;
    let mut epochs_ref: Option<usize> = None;
    let mut out = BTreeMap::new();
    for (strategy, reps) in runs {
        let keys: BTreeSet<usize> = reps.keys().copied().collect();
        match &reps_ref {
            None => reps_ref = Some(keys),
            Some(k) if *k != keys => {
                return Err(Error::IncompleteGrid(format!(
                    "strategy `{strategy}` has replications {keys:?}, expected {k:?}"
                )))
            }
            Some(_) => {}
        }
        let mut finals = Vec::with_capacity(reps.len());
        for (rep, mut rows) in reps {
            rows.sort_by_key(|r| r.epoch);
            let epochs = rows.len();
            if rows.iter().enumerate().any(|(i, r)| r.epoch != i) {
                return Err(Error::IncompleteGrid(format!(
                    "strategy `{strategy}` replication {rep}: epochs are not exactly 0..{epochs}"
                )));
            }
            match epochs_ref {
                None => epochs_ref = Some(epochs),
                Some(t) if t != epochs => {
                    return Err(Error::IncompleteGrid(format!(
                        "strategy `{strategy}` replication {rep}: {epochs} epochs, expected {t}"
                    )))
                }
                Some(_) => {}
            }
            let last = rows[epochs - 1];
            finals.push((last.cum_realized_regret, last.cum_reward));
        }
        out.insert(strategy.to_string(), finals);
    }
    Ok(out)
}

pub fn summarize(records: &[RunRecord]) -> Result<Summary> {
    let mut rows: Vec<StrategySummary> = final_values(records)?
        .into_iter()
        .map(|(strategy, finals)| {
            let regret: Vec<f64> = finals.iter().map(|f| f.0).collect();
            let reward: Vec<f64> = finals.iter().map(|f| f.1).collect();
            StrategySummary {
                strategy,
                replications: finals.len(),
                mean_regret: mean(&regret),
                median_regret: median(&regret),
                mean_reward: mean(&reward),
                median_reward: median(&reward),
            }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.median_regret
            .total_cmp(&b.median_regret)
            .then_with(|| a.strategy.cmp(&b.strategy))
    });
    Ok(Summary { rows })
}

impl Summary {
    pub fn row(&self, strategy: &str) -> Option<&StrategySummary> {
        self.rows.iter().find(|r| r.strategy == strategy)
    }

    pub fn to_table(&self) -> String {
        let headers = [
            "strategy",
            "reps",
            "median cum regret",
            "mean cum regret",
            "median cum reward",
            "mean cum reward",
        ];
        let cells: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.strategy.clone(),
                    r.replications.to_string(),
                    format!("{:.4}", r.median_regret),
                    format!("{:.4}", r.mean_regret),
                    format!("{:.2}", r.median_reward),
                    format!("{:.2}", r.mean_reward),
                ]
            })
            .collect();
        let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, row: &[String]| {
            for (i, (c, w)) in row.iter().zip(&widths).enumerate() {
                if i == 0 {
                    let _ = write!(out, "{c:<w$}");
                } else {
                    let _ = write!(out, "  {c:>w$}");
                }
            }
            out.push('\n');
        };
        line(&mut out, &headers.map(String::from));
        let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &cells {
            line(&mut out, row);
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "strategy",
            "replications",
            "mean_cum_realized_regret",
            "median_cum_realized_regret",
            "mean_cum_reward",
            "median_cum_reward",
        ])
        .expect("in-memory write");
        for r in &self.rows {
            w.write_record([
                r.strategy.clone(),
                r.replications.to_string(),
                r.mean_regret.to_string(),
                r.median_regret.to_string(),
                r.mean_reward.to_string(),
                r.median_reward.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::environment::ArmId;

    fn grid(strategies: &[(&str, f64)], reps: usize, epochs: usize) -> Vec<RunRecord> {
        let mut out = Vec::new();
        for &(s, per_epoch) in strategies {
            for rep in 0..reps {
                for e in 0..epochs {
                    let scale = (e + 1) as f64 * (1.0 + rep as f64);
                    out.push(RunRecord {
                        run_id: format!("x:{s}:{rep}"),
                        strategy: s.into(),
                        replication: rep,
                        epoch: e,
                        optimal_arm: ArmId(0),
                        mu_star: 0.9,
                        realized_reward: 0.8,
                        pseudo_regret: per_epoch,
                        realized_regret: per_epoch,
                        cum_reward: 0.8 * (e + 1) as f64,
                        cum_pseudo_regret: per_epoch * scale,
                        cum_realized_regret: per_epoch * scale,
                        counts: vec![1, 1],
                    });
                }
            }
        }
        out
    }

    #[test]
    fn single_replication_echoes_final_row() {
        let s = summarize(&grid(&[("a", 0.1)], 1, 4)).unwrap();
        let r = s.row("a").unwrap();
        assert!((r.median_regret - 0.4).abs() < 1e-12);
        assert_eq!(r.mean_regret, r.median_regret);
        assert!((r.median_reward - 3.2).abs() < 1e-12);
    }

    #[test]
    fn rows_ordered_by_median_regret() {
        let s = summarize(&grid(&[("hi", 0.3), ("lo", 0.1), ("mid", 0.2)], 3, 2)).unwrap();
        let names: Vec<_> = s.rows.iter().map(|r| r.strategy.as_str()).collect();
        assert_eq!(names, ["lo", "mid", "hi"]);
    }

    #[test]
    fn incomplete_grids_rejected() {
        let mut g = grid(&[("a", 0.1), ("b", 0.1)], 2, 3);
        g.remove(4);
        assert!(matches!(summarize(&g), Err(Error::IncompleteGrid(_))));

        let mut g = grid(&[("a", 0.1), ("b", 0.1)], 2, 3);
        g.retain(|r| !(r.strategy == "b" && r.replication == 1));
        assert!(matches!(summarize(&g), Err(Error::IncompleteGrid(_))));
    }

    #[test]
    fn order_insensitive() {
        let g = grid(&[("a", 0.1), ("b", 0.2)], 5, 6);
        let mut shuffled = g.clone();
        shuffled.reverse();
        shuffled.swap(3, 17);
        assert_eq!(summarize(&g).unwrap(), summarize(&shuffled).unwrap());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn table_and_csv_render() {
        let s = summarize(&grid(&[("a", 0.1)], 2, 2)).unwrap();
        let t = s.to_table();
        assert!(t.lines().next().unwrap().starts_with("strategy"));
        assert_eq!(t.lines().count(), 3);
        let c = s.to_csv();
        assert!(c.starts_with("strategy,replications,"));
        assert_eq!(c.lines().count(), 2);
    }
}
