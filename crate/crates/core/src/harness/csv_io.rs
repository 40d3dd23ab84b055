//! Per-epoch record CSV.
//!
//! Header: `run_id,strategy,replication,epoch,optimal_arm,mu_star,
//! realized_reward,pseudo_regret,realized_regret,cum_reward,
//! cum_pseudo_regret,cum_realized_regret,count_arm_0,...,count_arm_{K-1}`.
//! Floats use the shortest decimal that parses back to the same value.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use super::run::RunRecord;
use crate::environment::ArmId;
use crate::error::{Error, Result};

pub const FIXED_COLUMNS: [&str; 12] = [
    "run_id",
    "strategy",
    "replication",
    "epoch",
    "optimal_arm",
    "mu_star",
    "realized_reward",
    "pseudo_regret",
    "realized_regret",
    "cum_reward",
    "cum_pseudo_regret",
    "cum_realized_regret",
];

pub fn header(arms: usize) -> Vec<String> {
    FIXED_COLUMNS
        .iter()
        .map(|c| c.to_string())
        .chain((0..arms).map(|k| format!("count_arm_{k}")))
        .collect()
}

/// Writes records sorted by (strategy, replication, epoch). An empty slice
/// writes only the header, sized by `arms`.
pub fn write_csv<W: Write>(records: &[RunRecord], arms: usize, sink: W) -> csv::Result<()> {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (a.strategy.as_str(), a.replication, a.epoch).cmp(&(
            b.strategy.as_str(),
            b.replication,
            b.epoch,
        ))
    });
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header(arms))?;
    for r in sorted {
        let mut row = vec![
            r.run_id.clone(),
            r.strategy.clone(),
            r.replication.to_string(),
            r.epoch.to_string(),
            r.optimal_arm.to_string(),
            r.mu_star.to_string(),
            r.realized_reward.to_string(),
            r.pseudo_regret.to_string(),
            r.realized_regret.to_string(),
            r.cum_reward.to_string(),
            r.cum_pseudo_regret.to_string(),
            r.cum_realized_regret.to_string(),
        ];
        row.extend(r.counts.iter().map(|c| c.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(records: &[RunRecord], arms: usize, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    write_csv(records, arms, file).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

/// Parses a CSV written by [`write_csv`], checking the header column by column.
pub fn read_csv<R: Read>(source: R) -> Result<Vec<RunRecord>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(source);
    let head = rdr
        .headers()
        .map_err(|e| Error::Schema(format!("unreadable header: {e}")))?
        .clone();
    for (i, want) in FIXED_COLUMNS.iter().enumerate() {
        match head.get(i) {
            Some(got) if got == *want => {}
            Some(got) => {
                return Err(Error::Schema(format!(
                    "column {i}: expected `{want}`, found `{got}`"
                )))
            }
            None => return Err(Error::Schema(format!("missing column `{want}`"))),
        }
    }
    let arms = head.len() - FIXED_COLUMNS.len();
    for k in 0..arms {
        let want = format!("count_arm_{k}");
        let got = &head[FIXED_COLUMNS.len() + k];
        if got != want {
            return Err(Error::Schema(format!(
                "column {}: expected `{want}`, found `{got}`",
                FIXED_COLUMNS.len() + k
            )));
        }
    }
    if arms == 0 {
        return Err(Error::Schema("missing column `count_arm_0`".into()));
    }

    let mut out = Vec::new();
    for (i, row) in rdr.records().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Schema(format!("row {line}: {e}")))?;
        let cell = |c: usize| -> &str { row.get(c).unwrap_or("") };
        let name = |c: usize| -> String { head.get(c).unwrap_or("?").to_string() };
        let int = |c: usize| -> Result<usize> {
            cell(c).parse().map_err(|_| {
                Error::Schema(format!(
                    "row {line}, column `{}`: bad integer `{}`",
                    name(c),
                    cell(c)
                ))
            })
        };
        let float = |c: usize| -> Result<f64> {
            cell(c).parse().map_err(|_| {
                Error::Schema(format!(
                    "row {line}, column `{}`: bad number `{}`",
                    name(c),
                    cell(c)
                ))
            })
        };
        out.push(RunRecord {
            run_id: cell(0).to_string(),
            strategy: cell(1).to_string(),
            replication: int(2)?,
            epoch: int(3)?,
            optimal_arm: ArmId(int(4)?),
            mu_star: float(5)?,
            realized_reward: float(6)?,
            pseudo_regret: float(7)?,
            realized_regret: float(8)?,
            cum_reward: float(9)?,
            cum_pseudo_regret: float(10)?,
            cum_realized_regret: float(11)?,
            counts: (0..arms)
                .map(|k| int(FIXED_COLUMNS.len() + k))
                .collect::<Result<_>>()?,
        });
    }
    Ok(out)
}

pub fn read_csv_file(path: &Path) -> Result<Vec<RunRecord>> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file).map_err(|e| match e {
        Error::Schema(msg) => Error::Schema(format!("{}: {msg}", path.display())),
        other => other,
    })
}
