//! Experiment configs, seeded replications, CSV output and summaries.

mod config;
mod csv_io;
mod run;
mod summary;

pub use config::{
    load_config, ExperimentConfig, RewardModelSpec, StrategySpec, DEFAULT_ARMS, DEFAULT_EPOCHS,
    DEFAULT_GAMMA, DEFAULT_OUTPUT_DIR, DEFAULT_REPLICATIONS, DEFAULT_STORES,
};
pub use csv_io::{header, read_csv, read_csv_file, write_csv, write_csv_file, FIXED_COLUMNS};
pub use run::{
    child_seed, replication_model, run_experiment, run_experiment_with, run_single, Execution,
    RunRecord,
};
pub use summary::{final_values, median, summarize, StrategySummary, Summary};

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Paths written by [`write_outputs`].
#[derive(Debug, Clone)]
pub struct OutputPaths {
    pub records: PathBuf,
    pub summary_csv: PathBuf,
    pub summary_txt: PathBuf,
}

/// Writes `<dir>/<name>.csv`, `<dir>/<name>.summary.csv` and `<dir>/<name>.summary.txt`.
pub fn write_outputs(
    config: &ExperimentConfig,
    records: &[RunRecord],
    summary: &Summary,
    dir: &Path,
) -> Result<OutputPaths> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| Error::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let paths = OutputPaths {
        records: dir.join(format!("{}.csv", config.name)),
        summary_csv: dir.join(format!("{}.summary.csv", config.name)),
        summary_txt: dir.join(format!("{}.summary.txt", config.name)),
    };
    write_csv_file(records, config.arms, &paths.records)?;
    fs::write(&paths.summary_csv, summary.to_csv()).map_err(io(&paths.summary_csv))?;
    fs::write(&paths.summary_txt, summary.to_table()).map_err(io(&paths.summary_txt))?;
    Ok(paths)
}
