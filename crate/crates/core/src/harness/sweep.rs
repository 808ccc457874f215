use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::{OutputFormat, SweepConfig};
use super::experiment::{run_experiment_with, worker_count, write_rows, Summary};
use crate::error::Result;

/// One sweep table row. The Eve columns are empty when fewer than
/// [`MIN_MI_SAMPLES`](crate::analysis::MIN_MI_SAMPLES) trials completed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub detection_prob: f64,
    pub detection_ci_lo: f64,
    pub detection_ci_hi: f64,
    pub eve_info: Option<f64>,
    pub eve_info_ci_lo: Option<f64>,
    pub eve_info_ci_hi: Option<f64>,
}

impl SweepRow {
    pub fn from_summary(value: f64, s: &Summary) -> Self {
        Self {
            value,
            detection_prob: s.detection_prob,
            detection_ci_lo: s.detection_ci.0,
            detection_ci_hi: s.detection_ci.1,
            eve_info: s.eve_info_mi.map(|m| m.plug_in),
            eve_info_ci_lo: s.eve_info_mi.map(|m| m.ci_lo),
            eve_info_ci_hi: s.eve_info_mi.map(|m| m.ci_hi),
        }
    }
}

/// One experiment per value; writes the table to `base.output` when set.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let workers = worker_count();
    let mut rows = Vec::with_capacity(cfg.values.len());
    for &v in &cfg.values {
        let result = run_experiment_with(&cfg.at(v)?, workers)?;
        rows.push(SweepRow::from_summary(v, &result.summary));
    }
    if let Some(path) = &cfg.base.output {
        write_sweep(path, cfg.base.format, &rows)?;
    }
    Ok(rows)
}

pub fn write_sweep(path: &Path, format: OutputFormat, rows: &[SweepRow]) -> Result<()> {
    write_rows(path, format, rows)
}
